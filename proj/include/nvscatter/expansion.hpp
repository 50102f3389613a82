#pragma once

#include <array>
#include <map>
#include <string>

#include "nvscatter/field.hpp"

namespace nv {

/// Large-k expansion coefficients ν_{1,ℓ}, ν_{2,ℓ}, ℓ = 0..3, of the k-plane
/// CGO pair (sharp = the ν^# family of the reflected-conjugated potential,
/// already composed with z → −z).
struct ExpansionCoefficients {
    std::array<ComplexField, 4> nu1;
    std::array<ComplexField, 4> nu2;
    bool sharp = false;
};

/// Coefficients via the recurrence
///   ν_{2,0} = ½ū,  ν_{2,ℓ} = ½ū·ν_{1,ℓ−1} − ∂ν_{2,ℓ−1},  ν_{1,ℓ} = ½P(u·ν_{2,ℓ}),
/// with dealiased products. zero_mode_alpha perturbs the P zero-mode
/// convention (output zero mode = α·mean of the argument) for the
/// insensitivity checks.
ExpansionCoefficients nu_coeffs(const ComplexField& u, cx zero_mode_alpha = 0.0);

/// The ν^# family by the substitution rules u → −ū, ū → −u, ∂ → −∂, P → −P.
ExpansionCoefficients nu_sharp_coeffs(const ComplexField& u, cx zero_mode_alpha = 0.0);

/// Assembles u̇ = 2·{[ν₁ν₂^#]₃ + conj([ν₂ν₁^#]₃)} from the ℓ ≤ 3 coefficients
/// via the bracket sums; equals −∂³u − ∂̄³u − NL(u) up to aliasing.
ComplexField residue_rhs(const ComplexField& u, cx zero_mode_alpha = 0.0);

/// The two bracket sums graded by homogeneity degree (number of u-factors),
/// before any cancellation: sums[d] collects every degree-d contribution and
/// max_member[d] the largest single contribution norm, so the fifth- and
/// seventh-order cancellations can be asserted directly.
struct BracketOrderSums {
    std::map<int, ComplexField> t1, t2;
    std::map<int, double> t1_max_member, t2_max_member;
};
BracketOrderSums residue_bracket_sums(const ComplexField& u, cx zero_mode_alpha = 0.0);

/// One NVF1 file per (component, ℓ, sharp-flag):
/// <prefix>_nu<component>_<ell>[_sharp].nvf under dir.
void save_coefficients(const std::string& dir, const std::string& prefix,
                       const ExpansionCoefficients& coeffs);

}  // namespace nv
