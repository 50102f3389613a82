#include "nvscatter/evolution.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "nvscatter/errors.hpp"
#include "nvscatter/io.hpp"
#include "nvscatter/miura.hpp"
#include "nvscatter/norms.hpp"
#include "nvscatter/schrodinger.hpp"
#include "nvscatter/spectral.hpp"

namespace nv {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

ScatteringData phase_multiply(const ScatteringData& src, const std::function<double(cx)>& theta) {
    ScatteringData out = src;
    const Grid& g = src.field.grid;
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const double a = theta(g.node(ix, iy));
            out.field.at(ix, iy) *= cx(std::cos(a), std::sin(a));
        }
    return out;
}

}  // namespace

ScatteringData evolve_r(const ScatteringData& r, double t) {
    if (r.kind != ScatterKind::dsii_r)
        throw std::invalid_argument("evolve_r: data is not of kind dsii_r");
    // k̄³ − k³ = −2i·Im(k³)
    return phase_multiply(r, [t](cx k) { return -2.0 * t * std::imag(k * k * k); });
}

ScatteringData evolve_t_schrodinger(const ScatteringData& t_data, double t) {
    if (t_data.kind != ScatterKind::schrodinger_t)
        throw std::invalid_argument("evolve_t_schrodinger: data is not of kind schrodinger_t");
    // −it(k³ + k̄³) = −2it·Re(k³)
    return phase_multiply(t_data, [t](cx k) { return -2.0 * t * std::real(k * k * k); });
}

void check_phase_resolution(const ScatteringData& data, double t) {
    if (t == 0.0) return;
    const Grid& g = data.field.grid;
    // A node violates the sampling rule when the phase advances by more than
    // π/4 per grid step there: h·|∇ₖ(t·phase)| = h·6·t·|k|² > π/4. What that
    // costs is the data mass sitting on the violating set, so the guard fires
    // on that mass rather than on the bare worst node (the far tail of r is
    // orders below every stated tolerance and may not hold the run hostage).
    const double l2 = l2_norm(data.field);
    if (l2 == 0.0) return;
    double viol2 = 0.0;
    double kmax_needed = 0.0;
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const cx k = g.node(ix, iy);
            if (6.0 * std::abs(t) * std::norm(k) * g.h() > kPi / 4.0) {
                viol2 += std::norm(data.field.at(ix, iy));
                kmax_needed = std::max(kmax_needed, std::abs(k));
            }
        }
    const double viol_mass = g.h() * std::sqrt(viol2) / l2;
    if (viol_mass <= 1e-4) return;
    // every node must satisfy the rule: h ≤ π/(24·t·kmax²)
    const double h_needed = kPi / (24.0 * std::abs(t) * kmax_needed * kmax_needed);
    const int nk_needed = static_cast<int>(std::ceil(2.0 * g.L / h_needed));
    char msg[200];
    std::snprintf(msg, sizeof msg,
                  "evolution phase underresolved: %.2e of the data mass (rel L2) sits where "
                  "the phase advances past pi/4 per step; need n_k >= %d (have %d)",
                  viol_mass, nk_needed, g.n);
    throw PhaseUnderresolved(nk_needed, msg);
}

std::vector<ComplexField> solve_mnv(const ComplexField& u0, const Grid& kgrid,
                                    const EvolutionPlan& plan, const SolverConfig& cfg) {
    plan.validate();
    ScatteringData r0 = forward_R(u0, kgrid, cfg);
    std::vector<ComplexField> out;
    out.reserve(plan.t_values.size());
    for (double t : plan.t_values) {
        check_phase_resolution(r0, t);
        out.push_back(inverse_I(evolve_r(r0, t), u0.grid, cfg));
    }
    return out;
}

std::vector<ComplexField> solve_nv(const ComplexField& u0, const Grid& kgrid,
                                   const EvolutionPlan& plan, const SolverConfig& cfg) {
    std::vector<ComplexField> traj = solve_mnv(u0, kgrid, plan, cfg);
    for (auto& f : traj) f = miura_map(f);
    return traj;
}

std::vector<ComplexField> nv_via_schrodinger(const ComplexField& u0, const Grid& kgrid,
                                             const EvolutionPlan& plan, const SolverConfig& cfg,
                                             double smallk_bound) {
    plan.validate();
    ScatteringData t0 = forward_T(u0, kgrid, cfg);
    std::vector<ComplexField> out;
    out.reserve(plan.t_values.size());
    for (double t : plan.t_values) {
        check_phase_resolution(t0, t);
        out.push_back(inverse_Q(evolve_t_schrodinger(t0, t), u0.grid, cfg, smallk_bound));
    }
    return out;
}

void write_trajectory(const std::string& dir, const std::string& stem,
                      const std::vector<double>& times, const std::vector<ComplexField>& fields) {
    if (times.size() != fields.size())
        throw std::invalid_argument("write_trajectory: size mismatch");
    std::filesystem::create_directories(dir);
    std::FILE* manifest = std::fopen((dir + "/" + stem + "_manifest.txt").c_str(), "w");
    if (!manifest) throw FormatError("cannot open manifest for writing");
    for (std::size_t i = 0; i < times.size(); ++i) {
        char name[128];
        std::snprintf(name, sizeof name, "%s_%04zu.nvf", stem.c_str(), i);
        write_nvf1(dir + "/" + name, fields[i]);
        const cx mass = integral(fields[i]);
        const auto [mu, sym] = check_domain(fields[i]);
        (void)mu;
        std::fprintf(manifest, "%.17g %s %.17g %.17g %.17g %.17g\n", times[i], name,
                     l2_norm(fields[i]), mass.real(), mass.imag(), sym);
    }
    std::fclose(manifest);
}

}  // namespace nv
