#include "nvscatter/norms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nvscatter/spectral.hpp"

namespace nv {

double l2_norm(const ComplexField& f) {
    return f.grid.h() * std::sqrt(f.data.abs2().sum());
}

double l1_norm(const ComplexField& f) {
    return f.grid.h() * f.grid.h() * f.data.abs().sum();
}

double max_abs(const ComplexField& f) {
    return f.data.size() == 0 ? 0.0 : f.data.abs().maxCoeff();
}

double lp_norm(const ComplexField& f, double p) {
    if (std::isinf(p)) return max_abs(f);
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    const double h2 = f.grid.h() * f.grid.h();
    return std::pow(h2 * f.data.abs().pow(p).sum(), 1.0 / p);
}

double sobolev_norm(const ComplexField& f, SobolevWeights w) {
    const double l2 = l2_norm(f);
    double deriv2 = l2 * l2;
    if (w.m > 0) {
        ComplexField g = apply_multiplier(f, [&](cx zeta, int, int) {
            return std::pow(1.0 + std::norm(zeta), 0.5 * w.m);
        });
        const double nm = l2_norm(g);
        deriv2 = nm * nm;
    }
    double weight2 = l2 * l2;
    if (w.nweight > 0) {
        const Grid& g = f.grid;
        double acc = 0.0;
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const double wgt = std::pow(1.0 + std::abs(g.node(ix, iy)), w.nweight);
                acc += wgt * wgt * std::norm(f.at(ix, iy));
            }
        weight2 = g.h() * g.h() * acc;
    }
    return std::sqrt(deriv2 + weight2 - l2 * l2);
}

double rel_l2_error(const ComplexField& a, const ComplexField& b) {
    ComplexField diff{a.grid, a.data - b.data};
    return l2_norm(diff) / std::max(l2_norm(b), 1e-14);
}

}  // namespace nv
