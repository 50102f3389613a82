#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nv {

/// Iterative CGO solve failed to reach the residual target.
/// `param` is the spectral/physical parameter the solve was attached to.
struct NonConvergence : std::runtime_error {
    std::complex<double> param;
    int iterations;
    double residual;

    NonConvergence(std::complex<double> param_, int iterations_, double residual_,
                   const std::string& what_arg)
        : std::runtime_error(what_arg), param(param_), iterations(iterations_),
          residual(residual_) {}
};

/// |t(k)/k̄| exceeded the configured bound near k = 0; the data is not of
/// conductivity type as far as the discrete diagnostic can tell.
struct SingularSmallK : std::runtime_error {
    std::complex<double> k;
    double magnitude;

    SingularSmallK(std::complex<double> k_, double magnitude_, const std::string& what_arg)
        : std::runtime_error(what_arg), k(k_), magnitude(magnitude_) {}
};

/// The requested evolution time oscillates faster than the k-grid can sample.
struct PhaseUnderresolved : std::runtime_error {
    int required_nk;

    PhaseUnderresolved(int required_nk_, const std::string& what_arg)
        : std::runtime_error(what_arg), required_nk(required_nk_) {}
};

/// Conductivity input violates min γ ≥ c > 0.
struct NotPositive : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Conductivity input is not ≡ 1 within the boundary margin.
struct NotUnitAtBoundary : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File format violation (bad magic, truncated payload, ...).
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerically unstable trajectory in the direct stepper.
struct Unstable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nv
