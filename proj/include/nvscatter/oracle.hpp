#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "nvscatter/field.hpp"

namespace nv {

enum class StepScheme { etd_rk4, rk4_integrating_factor };

struct StepperConfig {
    double dt = 0.0;
    StepScheme scheme = StepScheme::etd_rk4;
    bool dealias = true;

    /// Enforces dt > 0 and the CFL-type bound dt·max|k_spec|³ ≤ 1 for the grid
    /// the stepper will run on.
    StepperConfig(double dt_, const Grid& g, StepScheme scheme_ = StepScheme::etd_rk4,
                  bool dealias_ = true);
};

/// The four-term cubic mNV nonlinearity, normalized so the flow reads
/// u_t + ∂³u + ∂̄³u + NL(u) = 0:
///   NL(u) = −(3/4)·[∂u·S(|u|²) + ∂̄u·S̄(|u|²) + u·S(ū∂u) + u·S̄(ū∂̄u)],
/// with S = ∂∂̄⁻¹ (Beurling) and S̄ its conjugate multiplier. Products are
/// dealiased (or plain when dealias = false).
ComplexField eval_NL_mnv(const ComplexField& u, bool dealias = true);

/// Full NV right-hand side: q_t = −∂³q − ∂̄³q − (3/4)∂(q·Sq) − (3/4)∂̄(q·S̄q).
ComplexField eval_rhs_nv(const ComplexField& q, bool dealias = true);

/// Full mNV right-hand side: u_t = −∂³u − ∂̄³u − NL(u).
ComplexField eval_rhs_mnv(const ComplexField& u, bool dealias = true);

/// Fourth-order exponential integrators for the two flows. Throws Unstable
/// if the L² norm grows past 10× its initial value.
ComplexField step_mnv(const ComplexField& u0, const StepperConfig& cfg, double t_end);
ComplexField step_nv(const ComplexField& q0, const StepperConfig& cfg, double t_end);

enum class FlowEquation { mnv, nv };

/// Max over interior times of the centered-difference strong-form residual,
/// ‖u_t + ∂³u + ∂̄³u + NL(u)‖₂ / (‖NL(u)‖₂ + ‖∂³u‖₂); needs ≥ 3 uniformly
/// spaced samples.
double strong_residual(const std::vector<std::pair<double, ComplexField>>& traj,
                       FlowEquation eq);

/// Space-time test function φ(z,t) = space(z)·profile(t).
struct WeakTestFunction {
    ComplexField space;
    std::function<double(double)> profile;
    std::function<double(double)> dprofile;
};

/// Max over the family of |weak-form pairing| normalized by the pairing's
/// term magnitudes; trapezoid in time over the trajectory samples.
double weak_residual(const std::vector<std::pair<double, ComplexField>>& traj, FlowEquation eq,
                     const std::vector<WeakTestFunction>& testfns);

}  // namespace nv
