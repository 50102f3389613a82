#pragma once

#include <functional>
#include <utility>

#include "nvscatter/field.hpp"
#include "nvscatter/spectral.hpp"

namespace nv {

enum class SolveStrategy { neumann, krylov_realified };

struct SolverConfig {
    double tol = 1e-10;
    int max_iter = 200;
    SolveStrategy strategy = SolveStrategy::neumann;

    void validate() const {
        if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be > 0");
        if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
    }
};

/// CGO pair at one parameter value: (μ₁, μ₂) of the z-plane problem at k, or
/// (ν₁, ν₂) of the k-plane problem at z. `first` → 1 and `second` → 0 toward
/// the frame; `residual` is the relative L² defect of w = 1 + T²w.
struct CgoSolution {
    cx param;
    ComplexField first;
    ComplexField second;
    int iterations = 0;
    double residual = 0.0;
};

/// Tψ = ½·P(e_k·u·ψ̄); antilinear in ψ.
ComplexField apply_T(const ComplexField& u, cx k, const ComplexField& psi);

/// Solves ∂̄μ₁ = ½e_k u μ̄₂, ∂̄μ₂ = ½e_k u μ̄₁, (μ₁,μ₂) → (1,0), via
/// μ₁ = 1 + T²μ₁ and μ₂ = Tμ₁. Throws NonConvergence past cfg.max_iter.
CgoSolution solve_mu(const ComplexField& u, cx k, const SolverConfig& cfg = {});

/// Same machinery in the k-plane: ∂̄_k ν₁ = ½e_k r̄ ν̄₂, ∂̄_k ν₂ = ½e_k r̄ ν̄₁,
/// ν → (1,0); r lives on a k-grid and z is the parameter.
CgoSolution solve_nu(const ComplexField& r, cx z, const SolverConfig& cfg = {});

/// Leading 1/z (resp. 1/k) coefficients of (first−1, second):
///   c_first  = (1/2π)·∫ e_k·u·conj(second) dA,
///   c_second = (1/2π)·∫ e_k·u·conj(first) dA,
/// the signs being the ones this project's Cauchy kernel produces (checked
/// against a direct pole fit of the solved fields on the outer annulus).
std::pair<cx, cx> large_param_check(const CgoSolution& sol, const ComplexField& u);

/// max |f − limit| over the outermost frame of nodes.
double boundary_defect(const ComplexField& f, cx limit);

/// Pair solve with a premultiplied kernel field E, i.e. Tψ = P(E·ψ̄).
/// solve_mu and solve_nu are thin wrappers; the scattering transforms call
/// this directly so the phase field is built once per node.
CgoSolution solve_pair_kernel(const Grid& g, const Eigen::ArrayXcd& E, const SolverConfig& cfg,
                              cx param);

/// Shared engine for antilinear fixed points x = 1 + K(x) with additive K.
/// Neumann accumulates K-powers of 1; the Krylov path realifies to 2n² real
/// unknowns and runs restarted GMRES. on_term (if set) receives each Neumann
/// term so callers can accumulate auxiliary series.
struct FixedPointResult {
    ComplexField x;
    int iterations = 0;
    double residual = 0.0;
};
FixedPointResult solve_fixed_point(const Grid& g,
                                   const std::function<ComplexField(const ComplexField&)>& K,
                                   const SolverConfig& cfg, cx param);

}  // namespace nv
