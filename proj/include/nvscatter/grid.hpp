#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>

namespace nv {

using cx = std::complex<double>;

/// Which plane the grid samples. Stored in the NVF1 role byte.
enum class GridRole : std::uint8_t { physical = 0, spectral = 1 };

/// Uniform periodic square lattice over [−L, L)², n samples per side,
/// spacing h = 2L/n. The same type serves the z-plane and the k-plane.
struct Grid {
    int n = 0;
    double L = 0.0;
    GridRole role = GridRole::physical;

    Grid() = default;
    Grid(int n_, double L_, GridRole role_ = GridRole::physical) : n(n_), L(L_), role(role_) {
        validate();
    }

    void validate() const {
        if (n < 16 || n % 2 != 0) throw std::invalid_argument("Grid: n must be even and >= 16");
        if (!(L > 0.0)) throw std::invalid_argument("Grid: L must be positive");
    }

    double h() const { return 2.0 * L / n; }
    std::size_t size() const { return static_cast<std::size_t>(n) * n; }

    double coord(int i) const { return -L + i * h(); }
    cx node(int ix, int iy) const { return {coord(ix), coord(iy)}; }

    /// Signed DFT index: j ∈ [0,n) ↦ j' ∈ [−n/2, n/2).
    int freq_index(int j) const { return j < n / 2 ? j : j - n; }
    /// Real frequency ξ of the mode exp(iξx) at DFT index j.
    double freq(int j) const { return 3.14159265358979323846264338328 / L * freq_index(j); }
    /// Complex frequency ζ = ξ₁ + iξ₂ at DFT indices (jx, jy).
    cx zeta(int jx, int jy) const { return {freq(jx), freq(jy)}; }

    bool same_lattice(const Grid& o) const { return n == o.n && L == o.L; }
    bool operator==(const Grid& o) const {
        return n == o.n && L == o.L && role == o.role;
    }
};

}  // namespace nv
