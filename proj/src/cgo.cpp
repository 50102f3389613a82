#include "nvscatter/cgo.hpp"

#include <cmath>
#include <vector>

#include "nvscatter/errors.hpp"
#include "nvscatter/norms.hpp"

namespace nv {

namespace {

using KOp = std::function<ComplexField(const ComplexField&)>;

Eigen::Map<const Eigen::VectorXd> as_real(const Eigen::ArrayXcd& v) {
    return {reinterpret_cast<const double*>(v.data()), 2 * v.size()};
}
Eigen::Map<Eigen::VectorXd> as_real(Eigen::ArrayXcd& v) {
    return {reinterpret_cast<double*>(v.data()), 2 * v.size()};
}

/// Restarted GMRES on the realified system (I − K)x = 1. The antilinear K is
/// additive, hence linear over ℝ on the 2n²-dimensional realified vector.
FixedPointResult gmres_realified(const Grid& g, const KOp& K, double tol, int budget, cx param) {
    const std::size_t nn = g.size();
    const int restart = 30;

    ComplexField b(g);
    b.data.setOnes();
    const double bnorm = as_real(b.data).norm();

    auto apply_A = [&](const Eigen::ArrayXcd& v) {
        ComplexField f{g, v};
        ComplexField kf = K(f);
        return Eigen::ArrayXcd(v - kf.data);
    };

    Eigen::ArrayXcd x = Eigen::ArrayXcd::Zero(nn);
    Eigen::ArrayXcd r = b.data;  // r = b − A·0
    double beta = bnorm;
    int iters = 0;

    while (iters < budget && beta > tol * bnorm) {
        std::vector<Eigen::ArrayXcd> V;
        V.reserve(restart + 1);
        V.push_back(r / beta);
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(restart + 1, restart);
        Eigen::VectorXd gvec = Eigen::VectorXd::Zero(restart + 1);
        gvec[0] = beta;
        std::vector<double> cs(restart), sn(restart);
        int j = 0;
        for (; j < restart && iters < budget; ++j, ++iters) {
            Eigen::ArrayXcd w = apply_A(V[j]);
            for (int i = 0; i <= j; ++i) {
                const double hij = as_real(V[i]).dot(as_real(w));
                H(i, j) = hij;
                as_real(w) -= hij * as_real(V[i]);
            }
            const double hj1 = as_real(w).norm();
            H(j + 1, j) = hj1;
            // previous Givens rotations
            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
                H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
                H(i, j) = t;
            }
            const double denom = std::hypot(H(j, j), H(j + 1, j));
            cs[j] = denom == 0.0 ? 1.0 : H(j, j) / denom;
            sn[j] = denom == 0.0 ? 0.0 : H(j + 1, j) / denom;
            H(j, j) = denom;
            H(j + 1, j) = 0.0;
            gvec[j + 1] = -sn[j] * gvec[j];
            gvec[j] = cs[j] * gvec[j];

            const bool lucky = hj1 == 0.0;
            if (!lucky) V.push_back(w / hj1);
            if (std::abs(gvec[j + 1]) <= tol * bnorm || lucky) {
                ++j;
                break;
            }
        }
        // back substitution on the j×j triangular system
        Eigen::VectorXd y = Eigen::VectorXd::Zero(j);
        for (int i = j - 1; i >= 0; --i) {
            double s = gvec[i];
            for (int l = i + 1; l < j; ++l) s -= H(i, l) * y[l];
            y[i] = H(i, i) == 0.0 ? 0.0 : s / H(i, i);
        }
        for (int i = 0; i < j; ++i) x += y[i] * V[i];
        r = b.data - apply_A(x);
        beta = as_real(r).norm();
    }

    if (beta > tol * bnorm)
        throw NonConvergence(param, iters, beta / bnorm, "krylov solve did not converge");
    return {ComplexField{g, std::move(x)}, iters, beta / bnorm};
}

}  // namespace

FixedPointResult solve_fixed_point(const Grid& g, const KOp& K, const SolverConfig& cfg,
                                   cx param) {
    cfg.validate();
    if (cfg.strategy == SolveStrategy::krylov_realified)
        return gmres_realified(g, K, cfg.tol, cfg.max_iter, param);

    ComplexField term(g);
    term.data.setOnes();
    ComplexField x = term;
    double prev = -1.0;
    int it = 0;
    bool converged = false;
    for (; it < cfg.max_iter; ++it) {
        term = K(term);
        x.data += term.data;
        const double tn = l2_norm(term);
        if (tn <= 0.25 * cfg.tol * l2_norm(x)) {
            converged = true;
            ++it;
            break;
        }
        if (prev >= 0.0 && tn > 0.95 * prev && it >= 2) break;  // stagnation → Krylov
        prev = tn;
    }
    FixedPointResult res;
    if (converged) {
        res = {std::move(x), it, 0.0};
    } else {
        res = gmres_realified(g, K, 0.5 * cfg.tol, std::max(1, cfg.max_iter - it), param);
        res.iterations += it;
    }
    ComplexField kx = K(res.x);
    ComplexField defect{g, 1.0 + kx.data - res.x.data};
    res.residual = l2_norm(defect) / std::max(l2_norm(res.x), 1e-300);
    if (!(res.residual <= cfg.tol))
        throw NonConvergence(param, res.iterations, res.residual,
                             "fixed-point solve did not reach tolerance");
    return res;
}

ComplexField apply_T(const ComplexField& u, cx k, const ComplexField& psi) {
    if (!u.grid.same_lattice(psi.grid)) throw std::invalid_argument("apply_T: grid mismatch");
    ComplexField ek = ek_phase(u.grid, k);
    return cauchy_P({u.grid, 0.5 * ek.data * u.data * psi.data.conjugate()});
}

/// Shared pair solve: E is the premultiplied kernel ½·e·(potential), so
/// Tψ = P(E·ψ̄). Neumann iterates T directly (each term feeds both component
/// sums); stagnation or an exhausted budget falls back to realified GMRES on
/// K = T². second = T(first) exactly, and the reported residual is the true
/// relative defect of first = 1 + T²first.
CgoSolution solve_pair_kernel(const Grid& g, const Eigen::ArrayXcd& E, const SolverConfig& cfg,
                              cx param) {
    cfg.validate();
    auto T = [&](const ComplexField& psi) {
        return cauchy_P({g, E * psi.data.conjugate()});
    };

    ComplexField first(g);
    first.data.setOnes();
    int iterations = 0;
    bool converged = false;

    if (cfg.strategy == SolveStrategy::neumann) {
        ComplexField term = first;
        ComplexField even_sum = first;
        double prev = -1.0;
        for (int it = 0; it < cfg.max_iter; ++it) {
            term = T(term);
            ++iterations;
            if (it % 2 == 1) even_sum.data += term.data;
            const double tn = l2_norm(term);
            if (tn <= 0.25 * cfg.tol * l2_norm(even_sum)) {
                converged = true;
                break;
            }
            if (prev > 0.0 && tn > 0.95 * prev && it >= 3) break;  // stagnation
            prev = tn;
        }
        first = std::move(even_sum);
    }
    if (!converged) {
        auto K = [&](const ComplexField& psi) { return T(T(psi)); };
        FixedPointResult r =
            gmres_realified(g, K, 0.5 * cfg.tol, std::max(1, cfg.max_iter - iterations), param);
        first = std::move(r.x);
        iterations += r.iterations;
    }

    CgoSolution sol;
    sol.param = param;
    sol.second = T(first);
    ComplexField ttfirst = T(sol.second);
    ComplexField defect{g, first.data - 1.0 - ttfirst.data};
    sol.residual = l2_norm(defect) / std::max(l2_norm(first), 1e-300);
    sol.first = std::move(first);
    sol.iterations = iterations;
    if (!(sol.residual <= cfg.tol))
        throw NonConvergence(param, sol.iterations, sol.residual,
                             "CGO solve did not reach tolerance");
    return sol;
}

CgoSolution solve_mu(const ComplexField& u, cx k, const SolverConfig& cfg) {
    ComplexField ek = ek_phase(u.grid, k);
    Eigen::ArrayXcd E = 0.5 * ek.data * u.data;
    return solve_pair_kernel(u.grid, E, cfg, k);
}

CgoSolution solve_nu(const ComplexField& r, cx z, const SolverConfig& cfg) {
    // e_k(z) = exp(k̄z̄ − kz) is symmetric under k ↔ z, so the k-plane phase
    // field at parameter z is ek_phase on the k-grid.
    ComplexField ez = ek_phase(r.grid, z);
    Eigen::ArrayXcd E = 0.5 * ez.data * r.data.conjugate();
    return solve_pair_kernel(r.grid, E, cfg, z);
}

std::pair<cx, cx> large_param_check(const CgoSolution& sol, const ComplexField& u) {
    // leading 1/z coefficients of (first−1, second); the prefactor sign goes
    // with this project's Cauchy kernel (1/π)/(z−ζ), under which
    // P(g) ~ (∫g/π)/z at large z
    ComplexField ek = ek_phase(u.grid, sol.param);
    const double pref = 1.0 / (2.0 * 3.14159265358979323846264338328);
    const cx c_first = pref * integral({u.grid, ek.data * u.data * sol.second.data.conjugate()});
    const cx c_second = pref * integral({u.grid, ek.data * u.data * sol.first.data.conjugate()});
    return {c_first, c_second};
}

double boundary_defect(const ComplexField& f, cx limit) {
    const int n = f.grid.n;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(f.at(i, 0) - limit));
        worst = std::max(worst, std::abs(f.at(i, n - 1) - limit));
        worst = std::max(worst, std::abs(f.at(0, i) - limit));
        worst = std::max(worst, std::abs(f.at(n - 1, i) - limit));
    }
    return worst;
}

}  // namespace nv
