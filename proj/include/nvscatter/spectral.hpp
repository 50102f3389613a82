#pragma once

#include <complex>

#include "nvscatter/field.hpp"

namespace nv {

/// Forward/backward 2D DFT of a field (forward unnormalized, inverse holds 1/n²).
Eigen::ArrayXcd fft_of(const ComplexField& f);
ComplexField field_from_spectrum(const Grid& g, Eigen::ArrayXcd spectrum);

/// Applies a Fourier multiplier given as a callable m(ζ, jx, jy) with
/// ζ = ξ₁ + iξ₂ the complex frequency of the mode.
template <class M>
ComplexField apply_multiplier(const ComplexField& f, M&& m) {
    Eigen::ArrayXcd hat = fft_of(f);
    const int n = f.grid.n;
    for (int jy = 0; jy < n; ++jy)
        for (int jx = 0; jx < n; ++jx) {
            const std::size_t idx = static_cast<std::size_t>(jy) * n + jx;
            hat[idx] *= m(f.grid.zeta(jx, jy), jx, jy);
        }
    return field_from_spectrum(f.grid, std::move(hat));
}

/// ∂̄ = ½(∂x₁ + i∂x₂) and ∂ = ½(∂x₁ − i∂x₂), spectral under the periodic
/// extension. dbar_pow/d_pow apply the p-th power of the symbol in one pass.
ComplexField dbar(const ComplexField& f);
ComplexField d(const ComplexField& f);
ComplexField dbar_pow(const ComplexField& f, int p);
ComplexField d_pow(const ComplexField& f, int p);
ComplexField laplacian(const ComplexField& f);

/// Exact spectral inverse of dbar (resp. d). The zero Fourier mode of the
/// output is α·mean(f); the project convention is α = 0, the knob exists so
/// identity tests can probe insensitivity to the convention.
ComplexField cauchy_P(const ComplexField& f, cx zero_mode_alpha = 0.0);
ComplexField cauchy_Pbar(const ComplexField& f, cx zero_mode_alpha = 0.0);

/// Beurling transform ∂∘∂̄⁻¹ (multiplier ζ̄/ζ, zero mode ↦ 0) and its
/// conjugate ∂̄∘∂⁻¹.
ComplexField beurling(const ComplexField& f);
ComplexField beurling_conj(const ComplexField& f);

/// e_k(z) = exp(k̄z̄ − kz) = exp(−2i·Im(kz)); exactly unimodular.
ComplexField ek_phase(const Grid& g, cx k);

/// Product with 2/3-rule zero padding: both factors are lifted to a 3n/2
/// grid, multiplied there, and the result truncated back. Alias-free for
/// quadratic products of band-limited fields.
ComplexField multiply_dealias(const ComplexField& a, const ComplexField& b);

}  // namespace nv
