#pragma once

#include <string>
#include <vector>

#include "nvscatter/scattering.hpp"

namespace nv {

enum class EvolutionFlavor { mnv_cubic, nv_schrodinger_cubic };

struct EvolutionPlan {
    std::vector<double> t_values;
    EvolutionFlavor flavor = EvolutionFlavor::mnv_cubic;

    void validate() const {
        if (t_values.empty()) throw std::invalid_argument("EvolutionPlan: no time points");
        double prev = -1.0;
        for (double t : t_values) {
            if (t < 0.0 || !(t > prev))
                throw std::invalid_argument(
                    "EvolutionPlan: t_values must be nonnegative and strictly increasing");
            prev = t;
        }
    }
};

/// r ↦ exp(t·(k̄³ − k³))·r pointwise. The exponent is purely imaginary, so
/// |r| is preserved node by node.
ScatteringData evolve_r(const ScatteringData& r, double t);

/// t-data ↦ exp(−it·(k³ + k̄³))·t-data pointwise, the multiplier that matches
/// evolve_r through the intertwining map t(k) = −2πi·k̄·conj(r(ik)).
ScatteringData evolve_t_schrodinger(const ScatteringData& t_data, double t);

/// Enforces h_k·max|∇ₖ(t·phase)| ≤ π/4 on the active support of the data
/// (|data| > 1e−6·max), i.e. 6·t·h_k·|k|² ≤ π/4 for the cubic flows. Throws
/// PhaseUnderresolved carrying the n_k that would satisfy the bound.
void check_phase_resolution(const ScatteringData& data, double t);

/// u(tᵢ) = I(exp((k̄³−k³)tᵢ)·R u₀).
std::vector<ComplexField> solve_mnv(const ComplexField& u0, const Grid& kgrid,
                                    const EvolutionPlan& plan, const SolverConfig& cfg = {});

/// q(tᵢ) = M(u(tᵢ)) through solve_mnv.
std::vector<ComplexField> solve_nv(const ComplexField& u0, const Grid& kgrid,
                                   const EvolutionPlan& plan, const SolverConfig& cfg = {});

/// q(tᵢ) = Q(exp(−itᵢ(k³+k̄³))·T q₀), the independent Schrödinger-side path.
std::vector<ComplexField> nv_via_schrodinger(const ComplexField& u0, const Grid& kgrid,
                                             const EvolutionPlan& plan,
                                             const SolverConfig& cfg = {},
                                             double smallk_bound = 1e6);

/// Writes one NVF1 file per time point plus a manifest line per time:
/// t, filename, L² norm, mass (∫u, real and imaginary parts), symmetry defect.
void write_trajectory(const std::string& dir, const std::string& stem,
                      const std::vector<double>& times, const std::vector<ComplexField>& fields);

}  // namespace nv
