#pragma once

#include <utility>

#include "nvscatter/field.hpp"

namespace nv {

/// A potential pair linked by the Miura-type map q = 2∂u + |u|², together
/// with the antiderivative φ = ∂̄⁻¹u, the generating conductivity (when there
/// is one), and the domain diagnostics of the map.
struct MiuraDatum {
    ComplexField u;
    ComplexField q;
    ComplexField phi;
    ComplexField gamma;
    cx mean_u{0.0, 0.0};
    double symmetry_defect = 0.0;
};

/// M(u) = 2∂u + |u|², pointwise in the nonlinear term.
ComplexField miura_map(const ComplexField& u);

/// Domain diagnostics: (∫u dA, max |∂u − conj(∂u)|).
std::pair<cx, double> check_domain(const ComplexField& u);

/// γ ↦ (u, q, φ): φ = ½ log γ, u = 2∂̄φ, q = M(u). Enforces γ real ≥ c > 0,
/// γ ≡ 1 within the L/4 boundary margin, and the consistency identity
/// ‖q − γ^{−1/2}Δγ^{1/2}‖₂ ≤ consistency_tol·‖q‖₂ (the half-log
/// normalization is the one that satisfies it). The default gate assumes the
/// input is spectrally resolved on its grid; callers working on deliberately
/// coarse grids own the looser tolerance they pass.
MiuraDatum conductivity_to_u(const ComplexField& gamma, double positivity_floor = 1e-3,
                             double consistency_tol = 1e-8);

/// Named conductivity generators with the super-gaussian profile
/// bump(s) = exp(−s⁴).
ComplexField radial_bump_conductivity(const Grid& g, double amplitude, double radius,
                                      cx center = {0.0, 0.0});

/// Gaussian-profile conductivity γ = 1 + A·exp(−|z−c|²/w²): the fastest
/// spectral decay of the family, the right choice when the data must stay
/// phase-resolved under cubic evolution. The margin condition caps w at
/// about L/7.6 for unit amplitude.
ComplexField gaussian_bump_conductivity(const Grid& g, double amplitude, double width,
                                        cx center = {0.0, 0.0});
ComplexField two_bump_conductivity(const Grid& g, double a1, double r1, cx c1, double a2,
                                   double r2, cx c2);

/// Schrödinger quadratic form ∫(|∇v|² + q·|v|²) dA by spectral gradients.
double schrodinger_quadratic_form(const ComplexField& q, const ComplexField& v);

}  // namespace nv
