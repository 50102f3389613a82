#pragma once

#include <string>
#include <vector>

#include "nvscatter/cgo.hpp"
#include "nvscatter/evolution.hpp"
#include "nvscatter/miura.hpp"
#include "nvscatter/oracle.hpp"

namespace nv {

/// Flat key=value configuration with [section] headers; every module-level
/// precondition is revalidated on load so invalid configs are rejected before
/// any compute starts.
struct RunConfig {
    // [grid]
    int n_z = 128;
    double L_z = 8.0;
    int n_k = 96;
    double K_max = 6.0;
    // [solver]
    SolverConfig solver;
    double smallk_bound = 1e6;
    // [input]
    std::string source = "radial-bump";  // radial-bump | two-bump | zero | file
    std::string input_file;
    double amplitude = 1.0, radius = 2.0, center_x = 0.0, center_y = 0.0;
    double amplitude2 = 0.6, radius2 = 1.5, center2_x = 1.4, center2_y = 0.9;
    double scale = 1.0;
    double consistency_tol = 1e-8;
    // [evolve]
    std::vector<double> times{0.0};
    EvolutionFlavor flavor = EvolutionFlavor::mnv_cubic;
    // [oracle]
    double oracle_dt = 1e-5;
    StepScheme scheme = StepScheme::etd_rk4;
    bool oracle_dealias = true;
    // [output]
    std::string outdir = "out";
    // [test] — hook for the verify mutation test
    bool test_break_phase = false;

    static RunConfig load(const std::string& path);
    void validate() const;

    Grid zgrid() const { return {n_z, L_z, GridRole::physical}; }
    Grid kgrid() const { return {n_k, K_max, GridRole::spectral}; }

    /// The configured conductivity (generators only; throws for file/zero).
    ComplexField build_gamma() const;
    /// The mNV initial datum u (generator-derived, file-loaded, or zero),
    /// with [input] scale applied.
    ComplexField build_u() const;
};

}  // namespace nv
