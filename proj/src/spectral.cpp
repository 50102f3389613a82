#include "nvscatter/spectral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "nvscatter/fft.hpp"

namespace nv {

namespace {

enum class Op { dbar, d, cauchyP, cauchyPbar, beurling, beurling_conj };

using Table = std::shared_ptr<const Eigen::ArrayXcd>;

Table multiplier_table(const Grid& g, Op op) {
    static std::mutex mu;
    static std::map<std::tuple<int, double, int>, Table> cache;
    const auto key = std::make_tuple(g.n, g.L, static_cast<int>(op));
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const int n = g.n;
    auto tab = std::make_shared<Eigen::ArrayXcd>(g.size());
    for (int jy = 0; jy < n; ++jy)
        for (int jx = 0; jx < n; ++jx) {
            const cx zeta = g.zeta(jx, jy);
            const cx izh = cx(0.0, 0.5);  // symbol of dbar is (i/2)·ζ
            cx v;
            const bool zero = (jx == 0 && jy == 0);
            switch (op) {
                case Op::dbar: v = izh * zeta; break;
                case Op::d: v = izh * std::conj(zeta); break;
                case Op::cauchyP: v = zero ? cx(0) : 1.0 / (izh * zeta); break;
                case Op::cauchyPbar: v = zero ? cx(0) : 1.0 / (izh * std::conj(zeta)); break;
                case Op::beurling: v = zero ? cx(0) : std::conj(zeta) / zeta; break;
                case Op::beurling_conj: v = zero ? cx(0) : zeta / std::conj(zeta); break;
            }
            (*tab)[static_cast<std::size_t>(jy) * n + jx] = v;
        }
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, std::move(tab)).first->second;
}

ComplexField apply_table(const ComplexField& f, Op op) {
    Table tab = multiplier_table(f.grid, op);
    Eigen::ArrayXcd hat = fft_of(f);
    hat *= *tab;
    return field_from_spectrum(f.grid, std::move(hat));
}

}  // namespace

Eigen::ArrayXcd fft_of(const ComplexField& f) {
    Eigen::ArrayXcd hat = f.data;
    fft::forward2d(f.grid.n, hat.data());
    return hat;
}

ComplexField field_from_spectrum(const Grid& g, Eigen::ArrayXcd spectrum) {
    fft::inverse2d(g.n, spectrum.data());
    return {g, std::move(spectrum)};
}

ComplexField make_field(const Grid& g, const std::function<cx(cx)>& fn) {
    ComplexField f(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) f.at(ix, iy) = fn(g.node(ix, iy));
    return f;
}

ComplexField reflect(const ComplexField& f) {
    const int n = f.grid.n;
    ComplexField g(f.grid);
    for (int iy = 0; iy < n; ++iy) {
        const int sy = (n - iy) % n;
        for (int ix = 0; ix < n; ++ix) g.at(ix, iy) = f.at((n - ix) % n, sy);
    }
    return g;
}

ComplexField rotate_by_i(const ComplexField& f) {
    const int n = f.grid.n;
    ComplexField g(f.grid);
    // g(w) = f(iw); node (ix, iy) ↦ point (−y, x)
    for (int iy = 0; iy < n; ++iy) {
        const int sx = (n - iy) % n;
        for (int ix = 0; ix < n; ++ix) g.at(ix, iy) = f.at(sx, ix);
    }
    return g;
}

ComplexField dbar(const ComplexField& f) { return apply_table(f, Op::dbar); }
ComplexField d(const ComplexField& f) { return apply_table(f, Op::d); }

ComplexField dbar_pow(const ComplexField& f, int p) {
    return apply_multiplier(f, [p](cx zeta, int, int) { return std::pow(cx(0.0, 0.5) * zeta, p); });
}

ComplexField d_pow(const ComplexField& f, int p) {
    return apply_multiplier(
        f, [p](cx zeta, int, int) { return std::pow(cx(0.0, 0.5) * std::conj(zeta), p); });
}

ComplexField laplacian(const ComplexField& f) {
    return apply_multiplier(f, [](cx zeta, int, int) { return -std::norm(zeta); });
}

ComplexField cauchy_P(const ComplexField& f, cx zero_mode_alpha) {
    ComplexField out = apply_table(f, Op::cauchyP);
    if (zero_mode_alpha != cx(0)) out.data += zero_mode_alpha * mean(f);
    return out;
}

ComplexField cauchy_Pbar(const ComplexField& f, cx zero_mode_alpha) {
    ComplexField out = apply_table(f, Op::cauchyPbar);
    if (zero_mode_alpha != cx(0)) out.data += zero_mode_alpha * mean(f);
    return out;
}

ComplexField beurling(const ComplexField& f) { return apply_table(f, Op::beurling); }
ComplexField beurling_conj(const ComplexField& f) { return apply_table(f, Op::beurling_conj); }

ComplexField ek_phase(const Grid& g, cx k) {
    ComplexField f(g);
    const double kre = k.real(), kim = k.imag();
    for (int iy = 0; iy < g.n; ++iy) {
        const double y = g.coord(iy);
        for (int ix = 0; ix < g.n; ++ix) {
            const double x = g.coord(ix);
            const double phase = -2.0 * (kre * y + kim * x);  // −2·Im(kz)
            f.at(ix, iy) = {std::cos(phase), std::sin(phase)};
        }
    }
    return f;
}

ComplexField multiply_dealias(const ComplexField& a, const ComplexField& b) {
    if (!a.grid.same_lattice(b.grid))
        throw std::invalid_argument("multiply_dealias: grid mismatch");
    const int n = a.grid.n;
    const int N = 3 * n / 2;
    const std::size_t big = static_cast<std::size_t>(N) * N;
    const double embed_scale = double(N) * N / (double(n) * n);

    auto lift = [&](const ComplexField& f) {
        Eigen::ArrayXcd hat = fft_of(f);
        Eigen::ArrayXcd padded = Eigen::ArrayXcd::Zero(big);
        for (int jy = 0; jy < n; ++jy) {
            const int sy = jy < n / 2 ? jy : N + (jy - n);
            for (int jx = 0; jx < n; ++jx) {
                const int sx = jx < n / 2 ? jx : N + (jx - n);
                padded[static_cast<std::size_t>(sy) * N + sx] =
                    embed_scale * hat[static_cast<std::size_t>(jy) * n + jx];
            }
        }
        fft::inverse2d(N, padded.data());
        return padded;
    };

    Eigen::ArrayXcd fa = lift(a);
    Eigen::ArrayXcd fb = lift(b);
    fa *= fb;
    fft::forward2d(N, fa.data());

    Eigen::ArrayXcd hat(a.grid.size());
    const double extract_scale = 1.0 / embed_scale;
    for (int jy = 0; jy < n; ++jy) {
        const int sy = jy < n / 2 ? jy : N + (jy - n);
        for (int jx = 0; jx < n; ++jx) {
            const int sx = jx < n / 2 ? jx : N + (jx - n);
            hat[static_cast<std::size_t>(jy) * n + jx] =
                extract_scale * fa[static_cast<std::size_t>(sy) * N + sx];
        }
    }
    return field_from_spectrum(a.grid, std::move(hat));
}

}  // namespace nv
