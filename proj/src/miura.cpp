#include "nvscatter/miura.hpp"

#include <cmath>

#include "nvscatter/errors.hpp"
#include "nvscatter/norms.hpp"
#include "nvscatter/spectral.hpp"

namespace nv {

ComplexField miura_map(const ComplexField& u) {
    ComplexField du = d(u);
    return {u.grid, 2.0 * du.data + u.data.abs2()};
}

std::pair<cx, double> check_domain(const ComplexField& u) {
    ComplexField du = d(u);
    const double defect = (du.data - du.data.conjugate()).abs().maxCoeff();
    return {integral(u), defect};
}

namespace {

// super-gaussian profile: numerically vanishes (underflows) well inside the
// L/4 margin and keeps the spectral tail far below the consistency gates,
// which boundary-degenerate bump profiles cannot do at desk resolutions
double smooth_bump(double s) {
    const double s4 = s * s * s * s;
    return s4 > 700.0 ? 0.0 : std::exp(-s4);
}

}  // namespace

ComplexField radial_bump_conductivity(const Grid& g, double amplitude, double radius, cx center) {
    return make_field(g, [&](cx z) {
        return cx(1.0 + amplitude * smooth_bump(std::abs(z - center) / radius), 0.0);
    });
}

ComplexField gaussian_bump_conductivity(const Grid& g, double amplitude, double width,
                                        cx center) {
    return make_field(g, [&](cx z) {
        const double s2 = std::norm(z - center) / (width * width);
        return cx(1.0 + (s2 > 700.0 ? 0.0 : amplitude * std::exp(-s2)), 0.0);
    });
}

ComplexField two_bump_conductivity(const Grid& g, double a1, double r1, cx c1, double a2,
                                   double r2, cx c2) {
    return make_field(g, [&](cx z) {
        return cx(1.0 + a1 * smooth_bump(std::abs(z - c1) / r1) +
                      a2 * smooth_bump(std::abs(z - c2) / r2),
                  0.0);
    });
}

MiuraDatum conductivity_to_u(const ComplexField& gamma, double positivity_floor,
                             double consistency_tol) {
    const Grid& g = gamma.grid;
    const double max_im = gamma.data.imag().abs().maxCoeff();
    if (max_im > 1e-12 * std::max(1.0, max_abs(gamma)))
        throw std::invalid_argument("conductivity_to_u: gamma must be real");
    const double gmin = gamma.data.real().minCoeff();
    if (gmin <= positivity_floor)
        throw NotPositive("conductivity_to_u: min gamma <= positivity floor");

    // gamma must be identically 1 within L/4 of the frame
    const double margin = 0.75 * g.L;
    double peak_dev = 0.0, margin_dev = 0.0;
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const cx z = g.node(ix, iy);
            const double dev = std::abs(gamma.at(ix, iy) - 1.0);
            peak_dev = std::max(peak_dev, dev);
            if (std::max(std::abs(z.real()), std::abs(z.imag())) >= margin)
                margin_dev = std::max(margin_dev, dev);
        }
    if (peak_dev > 0.0 && margin_dev > 1e-12 * peak_dev)
        throw NotUnitAtBoundary("conductivity_to_u: gamma != 1 within the boundary margin");

    MiuraDatum datum;
    datum.gamma = gamma;
    datum.phi = {g, 0.5 * gamma.data.real().log().cast<cx>()};
    ComplexField dbphi = dbar(datum.phi);
    datum.u = {g, 2.0 * dbphi.data};
    datum.q = miura_map(datum.u);
    std::tie(datum.mean_u, datum.symmetry_defect) = check_domain(datum.u);

    // q must reproduce γ^{−1/2}·Δ(γ^{1/2}); the floor keeps rounding noise of
    // the spectral Laplacian from failing the γ ≡ 1 (q = 0) case
    ComplexField sqrt_gamma{g, gamma.data.real().sqrt().cast<cx>()};
    ComplexField lap = laplacian(sqrt_gamma);
    ComplexField q_ref{g, lap.data / sqrt_gamma.data};
    const double zeta2 = 2.0 * std::pow(3.14159265358979323846264338328 * g.n / (2.0 * g.L), 2);
    const double floor = 64.0 * 2.22e-16 * zeta2 * l2_norm(sqrt_gamma);
    ComplexField qdiff{g, datum.q.data - q_ref.data};
    if (l2_norm(qdiff) > consistency_tol * l2_norm(datum.q) + floor)
        throw std::runtime_error("conductivity_to_u: Miura/conductivity consistency check failed");
    return datum;
}

double schrodinger_quadratic_form(const ComplexField& q, const ComplexField& v) {
    // |∇v|² = 2(|∂v|² + |∂̄v|²)
    ComplexField dv = d(v);
    ComplexField dbv = dbar(v);
    Eigen::ArrayXd density =
        2.0 * (dv.data.abs2() + dbv.data.abs2()) + q.data.real() * v.data.abs2();
    const double h = q.grid.h();
    return h * h * density.sum();
}

}  // namespace nv
