#pragma once

#include "nvscatter/cgo.hpp"
#include "nvscatter/scattering.hpp"

namespace nv {

enum class SchrodingerOrigin { from_miura_pair, from_t_dbar };

/// Normalized zero-energy CGO solution m. For from_miura_pair, m is a z-field
/// at spectral parameter `param` = k; for from_t_dbar, m is a k-field at
/// physical parameter `param` = z (the ∂̄-problem lives in the k-plane).
struct SchrodingerCgo {
    cx param;
    ComplexField m;
    SchrodingerOrigin origin = SchrodingerOrigin::from_miura_pair;
    int iterations = 0;
    double residual = 0.0;
};

/// m(z,k) = μ₁(z,ik) + e^{−i(kz+k̄z̄)}·conj(μ₂(z,ik)); musol must have been
/// solved at parameter ik for the mNV potential u.
SchrodingerCgo m_from_miura_pair(const CgoSolution& musol, cx k);

/// Gauged Schrödinger defect ‖(−Δ − 4ik∂̄ + q)m‖₂ / (‖q‖₂·max|m|); equals the
/// residual of (−Δ+q)e^{ikz}m = 0 with the exponential weight removed.
double schrodinger_residual(const SchrodingerCgo& cgo, const ComplexField& q);

/// t(k) = ∫ e^{i(k̄z̄+kz)}·q(z)·m(z,k) dA(z) with q = miura_map(u) and m built
/// from the Miura pair at each k-grid node. flip_phase_sign is a test hook
/// that conjugates the quadrature phase so identity checks can be shown to
/// fail loudly on a wrong sign convention.
ScatteringData forward_T(const ComplexField& u, const Grid& kgrid, const SolverConfig& cfg = {},
                         std::vector<NodeDiagnostic>* diag = nullptr,
                         bool flip_phase_sign = false);

/// Solves ∂̄_k m = (t(k)/4πk̄)·e^{−i(kz+k̄z̄)}·conj(m), m → 1, at one z.
/// The k = 0 node of t/k̄ is assigned 0; |t/k̄| > smallk_bound near the origin
/// throws SingularSmallK.
SchrodingerCgo solve_m_from_t(const ScatteringData& t, cx z, const SolverConfig& cfg = {},
                              double smallk_bound = 1e6);

/// q(z) = (i/π²)·∂̄_z ∫ (t(k)/k̄)·e^{−i(kz+k̄z̄)}·conj(m(z,k)) dA(k), with the
/// ∂̄_z applied spectrally to the assembled field.
ComplexField inverse_Q(const ScatteringData& t, const Grid& zgrid, const SolverConfig& cfg = {},
                       double smallk_bound = 1e6, std::vector<NodeDiagnostic>* diag = nullptr);

/// The Miura intertwining map on scattering data: t(k) = −2πi·k̄·conj(r(ik)).
ScatteringData intertwine_r_to_t(const ScatteringData& r);

}  // namespace nv
