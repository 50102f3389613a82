#include "nvscatter/oracle.hpp"

#include <cmath>

#include "nvscatter/errors.hpp"
#include "nvscatter/fft.hpp"
#include "nvscatter/norms.hpp"
#include "nvscatter/spectral.hpp"

namespace nv {

namespace {

ComplexField mult(const ComplexField& a, const ComplexField& b, bool dealias) {
    return dealias ? multiply_dealias(a, b) : a * b;
}

/// Spectral symbol of the linear flow u_t = −(∂³ + ∂̄³)u:
/// L(ζ) = (i/4)·Re(ζ³), purely imaginary.
Eigen::ArrayXcd linear_symbol(const Grid& g) {
    Eigen::ArrayXcd sym(g.size());
    for (int jy = 0; jy < g.n; ++jy)
        for (int jx = 0; jx < g.n; ++jx) {
            const cx zeta = g.zeta(jx, jy);
            sym[static_cast<std::size_t>(jy) * g.n + jx] =
                cx(0.0, 0.25 * std::real(zeta * zeta * zeta));
        }
    return sym;
}

double max_spectral_k(const Grid& g) {
    // corner of the frequency lattice
    const double kmax = 3.14159265358979323846264338328 / g.L * (g.n / 2);
    return kmax * std::sqrt(2.0);
}

using NLFn = std::function<ComplexField(const ComplexField&)>;

/// Kassam–Trefethen ETDRK4 weights by contour averaging around each symbol
/// value; handles the small-|z| cancellations uniformly.
struct EtdTables {
    Eigen::ArrayXcd E, E2, Q, f1, f2, f3;
};

EtdTables etd_tables(const Eigen::ArrayXcd& sym, double dt) {
    const int M = 32;
    const std::size_t nn = sym.size();
    EtdTables t;
    t.E = (dt * sym).exp();
    t.E2 = (0.5 * dt * sym).exp();
    t.Q = Eigen::ArrayXcd::Zero(nn);
    t.f1 = Eigen::ArrayXcd::Zero(nn);
    t.f2 = Eigen::ArrayXcd::Zero(nn);
    t.f3 = Eigen::ArrayXcd::Zero(nn);
    // full unit circle around each dt·L value; the symbol is imaginary, so the
    // half-circle/real-part shortcut for real symbols does not apply
    for (int m = 0; m < M; ++m) {
        const double a = 2.0 * 3.14159265358979323846264338328 * (m + 0.5) / M;
        const cx rot(std::cos(a), std::sin(a));
        for (std::size_t i = 0; i < nn; ++i) {
            const cx r = dt * sym[i] + rot;
            const cx er = std::exp(r);
            const cx r2 = r * r, r3 = r2 * r;
            t.Q[i] += dt * (std::exp(0.5 * r) - 1.0) / r;
            t.f1[i] += dt * (-4.0 - r + er * (4.0 - 3.0 * r + r2)) / r3;
            t.f2[i] += dt * (2.0 + r + er * (-2.0 + r)) / r3;
            t.f3[i] += dt * (-4.0 - 3.0 * r - r2 + er * (4.0 - r)) / r3;
        }
    }
    // the contour points come in conjugate pairs, so the averages are real
    // for real dt·sym; our symbol is imaginary, keep the full average
    const double invM = 1.0 / M;
    t.Q *= invM;
    t.f1 *= invM;
    t.f2 *= invM;
    t.f3 *= invM;
    return t;
}

Eigen::ArrayXcd to_spectrum(const ComplexField& f) { return fft_of(f); }

ComplexField to_field(const Grid& g, Eigen::ArrayXcd hat) {
    return field_from_spectrum(g, std::move(hat));
}

ComplexField integrate(const ComplexField& f0, const StepperConfig& cfg, double t_end,
                       const NLFn& nonlinear) {
    const Grid& g = f0.grid;
    if (t_end == 0.0) return f0;
    if (t_end < 0.0) throw std::invalid_argument("stepper: t_end must be nonnegative");
    const int steps = std::max(1, static_cast<int>(std::ceil(t_end / cfg.dt - 1e-12)));
    const double dt = t_end / steps;
    const Eigen::ArrayXcd sym = linear_symbol(g);
    const double norm0 = l2_norm(f0);

    auto nhat = [&](const Eigen::ArrayXcd& vhat) {
        ComplexField f = to_field(g, vhat);
        return to_spectrum(nonlinear(f));
    };

    Eigen::ArrayXcd v = to_spectrum(f0);
    if (cfg.scheme == StepScheme::etd_rk4) {
        EtdTables tab = etd_tables(sym, dt);
        for (int s = 0; s < steps; ++s) {
            const Eigen::ArrayXcd Nv = nhat(v);
            const Eigen::ArrayXcd a = tab.E2 * v + tab.Q * Nv;
            const Eigen::ArrayXcd Na = nhat(a);
            const Eigen::ArrayXcd b = tab.E2 * v + tab.Q * Na;
            const Eigen::ArrayXcd Nb = nhat(b);
            const Eigen::ArrayXcd c = tab.E2 * a + tab.Q * (2.0 * Nb - Nv);
            const Eigen::ArrayXcd Nc = nhat(c);
            v = tab.E * v + tab.f1 * Nv + 2.0 * tab.f2 * (Na + Nb) + tab.f3 * Nc;
            ComplexField probe = to_field(g, v);
            if (l2_norm(probe) > 10.0 * norm0)
                throw Unstable("stepper: L2 norm grew past 10x the initial value");
        }
    } else {
        const Eigen::ArrayXcd E = (0.5 * dt * sym).exp();
        const Eigen::ArrayXcd E2 = (dt * sym).exp();
        for (int s = 0; s < steps; ++s) {
            const Eigen::ArrayXcd k1 = dt * nhat(v);
            const Eigen::ArrayXcd k2 = dt * nhat(E * (v + 0.5 * k1));
            const Eigen::ArrayXcd k3 = dt * nhat(E * v + 0.5 * k2);
            const Eigen::ArrayXcd k4 = dt * nhat(E2 * v + E * k3);
            v = E2 * v + (E2 * k1 + 2.0 * E * (k2 + k3) + k4) / 6.0;
            ComplexField probe = to_field(g, v);
            if (l2_norm(probe) > 10.0 * norm0)
                throw Unstable("stepper: L2 norm grew past 10x the initial value");
        }
    }
    return to_field(g, std::move(v));
}

ComplexField nv_nonlinear(const ComplexField& q, bool dealias) {
    ComplexField sq = beurling(q);
    ComplexField sbq = beurling_conj(q);
    ComplexField t1 = d(mult(q, sq, dealias));
    ComplexField t2 = dbar(mult(q, sbq, dealias));
    return {q.grid, -0.75 * (t1.data + t2.data)};
}

}  // namespace

StepperConfig::StepperConfig(double dt_, const Grid& g, StepScheme scheme_, bool dealias_)
    : dt(dt_), scheme(scheme_), dealias(dealias_) {
    if (!(dt > 0.0)) throw std::invalid_argument("StepperConfig: dt must be positive");
    const double k3 = std::pow(max_spectral_k(g), 3);
    if (dt * k3 > 1.0)
        throw std::invalid_argument("StepperConfig: dt violates dt*max|k_spec|^3 <= 1");
}

ComplexField eval_NL_mnv(const ComplexField& u, bool dealias) {
    ComplexField du = d(u);
    ComplexField dbu = dbar(u);
    ComplexField uc = conj(u);
    ComplexField m2 = mult(u, uc, dealias);  // |u|²
    ComplexField a = mult(du, beurling(m2), dealias);
    ComplexField b = mult(dbu, beurling_conj(m2), dealias);
    ComplexField cc = mult(u, beurling(mult(uc, du, dealias)), dealias);
    ComplexField e = mult(u, beurling_conj(mult(uc, dbu, dealias)), dealias);
    return {u.grid, -0.75 * (a.data + b.data + cc.data + e.data)};
}

ComplexField eval_rhs_mnv(const ComplexField& u, bool dealias) {
    ComplexField lin = d_pow(u, 3) + dbar_pow(u, 3);
    ComplexField nl = eval_NL_mnv(u, dealias);
    return {u.grid, -lin.data - nl.data};
}

ComplexField eval_rhs_nv(const ComplexField& q, bool dealias) {
    ComplexField lin = d_pow(q, 3) + dbar_pow(q, 3);
    ComplexField nl = nv_nonlinear(q, dealias);
    return {q.grid, -lin.data + nl.data};
}

ComplexField step_mnv(const ComplexField& u0, const StepperConfig& cfg, double t_end) {
    return integrate(u0, cfg, t_end, [&](const ComplexField& u) {
        ComplexField nl = eval_NL_mnv(u, cfg.dealias);
        return ComplexField{u.grid, -nl.data};
    });
}

ComplexField step_nv(const ComplexField& q0, const StepperConfig& cfg, double t_end) {
    return integrate(q0, cfg, t_end,
                     [&](const ComplexField& q) { return nv_nonlinear(q, cfg.dealias); });
}

double strong_residual(const std::vector<std::pair<double, ComplexField>>& traj,
                       FlowEquation eq) {
    if (traj.size() < 3) throw std::invalid_argument("strong_residual: need >= 3 time points");
    const double dt = traj[1].first - traj[0].first;
    for (std::size_t i = 1; i < traj.size(); ++i)
        if (std::abs(traj[i].first - traj[i - 1].first - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("strong_residual: nonuniform time spacing");

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const ComplexField& u = traj[i].second;
        ComplexField ut{u.grid, (traj[i + 1].second.data - traj[i - 1].second.data) / (2.0 * dt)};
        ComplexField d3 = d_pow(u, 3);
        ComplexField db3 = dbar_pow(u, 3);
        ComplexField nl = eq == FlowEquation::mnv
                              ? eval_NL_mnv(u)
                              : ComplexField{u.grid, -nv_nonlinear(u, true).data};
        ComplexField res{u.grid, ut.data + d3.data + db3.data + nl.data};
        const double scale = l2_norm(nl) + l2_norm(d3);
        worst = std::max(worst, l2_norm(res) / std::max(scale, 1e-300));
    }
    return worst;
}

double weak_residual(const std::vector<std::pair<double, ComplexField>>& traj, FlowEquation eq,
                     const std::vector<WeakTestFunction>& testfns) {
    if (traj.size() < 2) throw std::invalid_argument("weak_residual: need >= 2 time points");
    const double dt = traj[1].first - traj[0].first;
    for (std::size_t i = 1; i < traj.size(); ++i)
        if (std::abs(traj[i].first - traj[i - 1].first - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("weak_residual: nonuniform time spacing");

    double worst = 0.0;
    for (const auto& tf : testfns) {
        const ComplexField& X = tf.space;
        ComplexField AX = d_pow(X, 3) + dbar_pow(X, 3);
        ComplexField dX = d(X);
        ComplexField dbX = dbar(X);
        cx pairing = 0.0;
        double magnitude = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double t = traj[i].first;
            const ComplexField& u = traj[i].second;
            const double w = (i == 0 || i + 1 == traj.size()) ? 0.5 * dt : dt;  // trapezoid
            const double p = tf.profile(t);
            const double pd = tf.dprofile(t);
            cx slice;
            double mag;
            if (eq == FlowEquation::mnv) {
                ComplexField nl = eval_NL_mnv(u);
                ComplexField lhs{u.grid, (pd * X.data + p * AX.data).conjugate() * u.data};
                ComplexField rhs{u.grid, (p * X.data).conjugate() * nl.data};
                slice = -integral(lhs) + integral(rhs);
                mag = std::abs(integral({u.grid, lhs.data.abs().cast<cx>()})) +
                      std::abs(integral({u.grid, rhs.data.abs().cast<cx>()}));
            } else {
                ComplexField sq = beurling(u);
                ComplexField sbq = beurling_conj(u);
                ComplexField term1{u.grid, (pd * X.data + p * AX.data).conjugate() * u.data};
                ComplexField term2{u.grid,
                                   0.75 * p * dX.data.conjugate() * u.data * sq.data};
                ComplexField term3{u.grid,
                                   0.75 * p * dbX.data.conjugate() * u.data * sbq.data};
                slice = integral(term1) + integral(term2) + integral(term3);
                mag = std::abs(integral({u.grid, term1.data.abs().cast<cx>()})) +
                      std::abs(integral({u.grid, term2.data.abs().cast<cx>()})) +
                      std::abs(integral({u.grid, term3.data.abs().cast<cx>()}));
            }
            pairing += w * slice;
            magnitude += w * mag;
        }
        worst = std::max(worst, std::abs(pairing) / std::max(magnitude, 1e-300));
    }
    return worst;
}

}  // namespace nv
