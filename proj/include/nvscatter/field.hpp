#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <utility>

#include "nvscatter/grid.hpp"

namespace nv {

/// Samples of a function ℂ→ℂ on a Grid. Row-major: data[iy·n + ix] is the
/// value at z = (−L + ix·h) + i(−L + iy·h).
struct ComplexField {
    Grid grid;
    Eigen::ArrayXcd data;

    ComplexField() = default;
    explicit ComplexField(const Grid& g) : grid(g), data(Eigen::ArrayXcd::Zero(g.size())) {}
    ComplexField(const Grid& g, Eigen::ArrayXcd values) : grid(g), data(std::move(values)) {}

    cx& at(int ix, int iy) { return data[static_cast<std::size_t>(iy) * grid.n + ix]; }
    cx at(int ix, int iy) const { return data[static_cast<std::size_t>(iy) * grid.n + ix]; }

    bool all_finite() const { return data.isFinite().all(); }
};

inline ComplexField zeros_like(const ComplexField& f) { return ComplexField(f.grid); }

/// Builds a field by evaluating fn at every node.
ComplexField make_field(const Grid& g, const std::function<cx(cx)>& fn);

inline ComplexField operator+(const ComplexField& a, const ComplexField& b) {
    return {a.grid, a.data + b.data};
}
inline ComplexField operator-(const ComplexField& a, const ComplexField& b) {
    return {a.grid, a.data - b.data};
}
inline ComplexField operator*(const ComplexField& a, const ComplexField& b) {
    return {a.grid, a.data * b.data};
}
inline ComplexField operator*(cx s, const ComplexField& a) { return {a.grid, s * a.data}; }
inline ComplexField operator*(double s, const ComplexField& a) { return {a.grid, s * a.data}; }
inline ComplexField operator-(const ComplexField& a) { return {a.grid, -a.data}; }

inline ComplexField conj(const ComplexField& a) { return {a.grid, a.data.conjugate()}; }

/// Grid mean (zero Fourier mode / n²).
inline cx mean(const ComplexField& f) { return f.data.sum() / static_cast<double>(f.grid.size()); }

/// Trapezoid quadrature of ∫f dA on the torus: h²·Σ f.
inline cx integral(const ComplexField& f) { return f.data.sum() * f.grid.h() * f.grid.h(); }

/// f(−z), sampled with periodic wraparound (−L column/row maps to itself).
ComplexField reflect(const ComplexField& f);

/// g(w) = f(i·w), sampled with periodic wraparound; the square lattice is
/// closed under multiplication by i.
ComplexField rotate_by_i(const ComplexField& f);

}  // namespace nv
