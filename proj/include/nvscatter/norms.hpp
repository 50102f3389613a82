#pragma once

#include "nvscatter/field.hpp"

namespace nv {

/// Derivative order m and spatial weight order n of the H^{m,n} norm,
/// ‖u‖² = ‖(1−Δ)^{m/2}u‖₂² + ‖(1+|z|)ⁿu‖₂² − ‖u‖₂²
/// (the −‖u‖₂² term makes H^{0,0} coincide with L² exactly; the norm is
/// monotone in both orders since both multipliers are ≥ 1).
struct SobolevWeights {
    int m = 0;
    int nweight = 0;

    SobolevWeights() = default;
    SobolevWeights(int m_, int nweight_) : m(m_), nweight(nweight_) {
        if (m < 0 || m > 2 || nweight < 0 || nweight > 2)
            throw std::invalid_argument("SobolevWeights: orders must be in {0,1,2}");
    }
};

double l2_norm(const ComplexField& f);
double l1_norm(const ComplexField& f);
double max_abs(const ComplexField& f);

/// Trapezoid L^p norm; p = infinity gives max |f|.
double lp_norm(const ComplexField& f, double p);

double sobolev_norm(const ComplexField& f, SobolevWeights w);

/// ‖a − b‖₂ / max(‖b‖₂, 1e−14).
double rel_l2_error(const ComplexField& a, const ComplexField& b);

}  // namespace nv
