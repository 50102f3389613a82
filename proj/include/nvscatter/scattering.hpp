#pragma once

#include <map>
#include <string>
#include <vector>

#include "nvscatter/cgo.hpp"
#include "nvscatter/field.hpp"

namespace nv {

enum class ScatterKind { dsii_r, schrodinger_t };

/// Per-node solver statistics from a forward/inverse transform sweep.
struct NodeDiagnostic {
    cx param;
    int iterations = 0;
    double residual = 0.0;
};

/// Scattering data on a k-grid plus provenance metadata.
struct ScatteringData {
    ComplexField field;
    ScatterKind kind = ScatterKind::dsii_r;
    std::map<std::string, double> source_norms;
    double decay_outer = 0.0;  // ‖|k|²·field‖₂ over the outer half |k| ≥ K_max/2

    double kmax() const { return field.grid.L; }
};

/// r = Ru: r(k) = −(1/π)·∫ e_k(z)·u(z)·conj(μ₁(z,k)) dA(z), μ from solve_mu
/// at every k-grid node. Per-node solves run concurrently; NonConvergence is
/// rethrown with the offending k attached.
ScatteringData forward_R(const ComplexField& u, const Grid& kgrid, const SolverConfig& cfg = {},
                         std::vector<NodeDiagnostic>* diag = nullptr);

/// u = Ir: u(z) = −(1/π)·∫ e_{−k}(z)·r(k)·ν₁(z,k) dA(k), ν from solve_nu at
/// every z-grid node.
ComplexField inverse_I(const ScatteringData& r, const Grid& zgrid, const SolverConfig& cfg = {},
                       std::vector<NodeDiagnostic>* diag = nullptr);

/// ‖|k|²·r‖₂ over the whole k-grid.
double decay_diagnostic(const ScatteringData& r);

/// Serialization: NVF1 payload (role = spectral) plus a key=value sidecar
/// at path + ".meta" carrying kind and source norms.
void save_scattering(const std::string& path, const ScatteringData& s);
ScatteringData load_scattering(const std::string& path);

void write_diagnostics_csv(const std::string& path, const std::vector<NodeDiagnostic>& diag);

}  // namespace nv
