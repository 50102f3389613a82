#include "nvscatter/expansion.hpp"

#include <filesystem>

#include "nvscatter/io.hpp"
#include "nvscatter/norms.hpp"
#include "nvscatter/spectral.hpp"

namespace nv {

namespace {

/// Field split by homogeneity degree in u; the recurrence preserves grading
/// (ū raises the degree by one, ∂ keeps it, P(u·) raises it by one).
using Graded = std::map<int, ComplexField>;

struct GradedExpansion {
    std::array<Graded, 4> nu1;
    std::array<Graded, 4> nu2;
};

GradedExpansion graded_coeffs(const ComplexField& u, bool sharp, cx alpha) {
    const double sgn = sharp ? -1.0 : 1.0;
    ComplexField a = sharp ? -conj(u) : u;        // plays the role of u
    ComplexField b{u.grid, sgn * (sharp ? u.data : Eigen::ArrayXcd(u.data.conjugate()))};

    auto P = [&](const ComplexField& f) {
        ComplexField p = cauchy_P(f, alpha);
        return ComplexField{f.grid, sgn * p.data};
    };
    auto D = [&](const ComplexField& f) {
        ComplexField df = d(f);
        return ComplexField{f.grid, sgn * df.data};
    };

    GradedExpansion g;
    g.nu2[0][1] = {u.grid, 0.5 * b.data};
    for (int ell = 0; ell <= 3; ++ell) {
        if (ell > 0) {
            for (const auto& [deg, f] : g.nu1[ell - 1]) {
                ComplexField t = multiply_dealias(b, f);
                t.data *= 0.5;
                auto it = g.nu2[ell].find(deg + 1);
                if (it == g.nu2[ell].end())
                    g.nu2[ell][deg + 1] = std::move(t);
                else
                    it->second.data += t.data;
            }
            for (const auto& [deg, f] : g.nu2[ell - 1]) {
                ComplexField t = D(f);
                auto it = g.nu2[ell].find(deg);
                if (it == g.nu2[ell].end()) {
                    t.data = -t.data;
                    g.nu2[ell][deg] = std::move(t);
                } else {
                    it->second.data -= t.data;
                }
            }
        }
        for (const auto& [deg, f] : g.nu2[ell]) {
            ComplexField t = P({u.grid, 0.5 * multiply_dealias(a, f).data});
            g.nu1[ell][deg + 1] = std::move(t);
        }
    }
    return g;
}

ComplexField graded_sum(const Grid& grid, const Graded& g) {
    ComplexField out(grid);
    for (const auto& [deg, f] : g) out.data += f.data;
    return out;
}

ExpansionCoefficients collapse(const Grid& grid, const GradedExpansion& g, bool sharp) {
    ExpansionCoefficients c;
    c.sharp = sharp;
    for (int ell = 0; ell <= 3; ++ell) {
        c.nu1[ell] = graded_sum(grid, g.nu1[ell]);
        c.nu2[ell] = graded_sum(grid, g.nu2[ell]);
    }
    return c;
}

struct GradedBracket {
    Graded sum;
    std::map<int, double> max_member;
};

void add_member(GradedBracket& b, int deg, ComplexField f, const Grid& grid) {
    const double nrm = l2_norm(f);
    auto mit = b.max_member.find(deg);
    if (mit == b.max_member.end() || nrm > mit->second) b.max_member[deg] = nrm;
    auto it = b.sum.find(deg);
    if (it == b.sum.end()) {
        if (f.data.size() == 0) f = ComplexField(grid);
        b.sum[deg] = std::move(f);
    } else {
        it->second.data += f.data;
    }
}

/// [x·y]₃ = y₃ + y₂·x₀ + y₁·x₁ + y₀·x₂ where xℓ, yℓ are the graded ν-pieces;
/// the degree of each pairwise product is the sum of the member degrees.
GradedBracket bracket3(const Grid& grid, const std::array<Graded, 4>& nu1_side,
                       const std::array<Graded, 4>& nu2_side) {
    GradedBracket out;
    for (const auto& [deg, f] : nu2_side[3]) add_member(out, deg, f, grid);
    for (int j = 0; j <= 2; ++j) {
        const Graded& x = nu2_side[2 - j];
        const Graded& y = nu1_side[j];
        for (const auto& [dx, fx] : x)
            for (const auto& [dy, fy] : y)
                add_member(out, dx + dy, multiply_dealias(fx, fy), grid);
    }
    return out;
}

}  // namespace

ExpansionCoefficients nu_coeffs(const ComplexField& u, cx zero_mode_alpha) {
    return collapse(u.grid, graded_coeffs(u, false, zero_mode_alpha), false);
}

ExpansionCoefficients nu_sharp_coeffs(const ComplexField& u, cx zero_mode_alpha) {
    return collapse(u.grid, graded_coeffs(u, true, zero_mode_alpha), true);
}

BracketOrderSums residue_bracket_sums(const ComplexField& u, cx zero_mode_alpha) {
    GradedExpansion plain = graded_coeffs(u, false, zero_mode_alpha);
    GradedExpansion sharp = graded_coeffs(u, true, zero_mode_alpha);
    // t1 = [ν₁(z,⋄)·ν₂^#(−z,⋄)]₃ : sharp second component against plain first
    GradedBracket t1 = bracket3(u.grid, plain.nu1, sharp.nu2);
    // t2 = [ν₂(z,⋄)·ν₁^#(−z,⋄)]₃
    GradedBracket t2 = bracket3(u.grid, sharp.nu1, plain.nu2);
    BracketOrderSums out;
    out.t1 = std::move(t1.sum);
    out.t2 = std::move(t2.sum);
    out.t1_max_member = std::move(t1.max_member);
    out.t2_max_member = std::move(t2.max_member);
    return out;
}

ComplexField residue_rhs(const ComplexField& u, cx zero_mode_alpha) {
    BracketOrderSums b = residue_bracket_sums(u, zero_mode_alpha);
    ComplexField t1 = graded_sum(u.grid, b.t1);
    ComplexField t2 = graded_sum(u.grid, b.t2);
    return {u.grid, 2.0 * (t1.data + t2.data.conjugate())};
}

void save_coefficients(const std::string& dir, const std::string& prefix,
                       const ExpansionCoefficients& coeffs) {
    std::filesystem::create_directories(dir);
    const std::string tag = coeffs.sharp ? "_sharp" : "";
    for (int ell = 0; ell <= 3; ++ell) {
        write_nvf1(dir + "/" + prefix + "_nu1_" + std::to_string(ell) + tag + ".nvf",
                   coeffs.nu1[ell]);
        write_nvf1(dir + "/" + prefix + "_nu2_" + std::to_string(ell) + tag + ".nvf",
                   coeffs.nu2[ell]);
    }
}

}  // namespace nv
