#include <CLI11.hpp>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>

#include "nvscatter/errors.hpp"
#include "nvscatter/evolution.hpp"
#include "nvscatter/expansion.hpp"
#include "nvscatter/io.hpp"
#include "nvscatter/miura.hpp"
#include "nvscatter/norms.hpp"
#include "nvscatter/oracle.hpp"
#include "nvscatter/parallel.hpp"
#include "nvscatter/runconfig.hpp"
#include "nvscatter/schrodinger.hpp"
#include "nvscatter/spectral.hpp"

namespace {

using namespace nv;

constexpr int kExitOk = 0;
constexpr int kExitIdentityFailure = 1;
constexpr int kExitSolverFailure = 2;
constexpr int kExitFormatError = 3;
constexpr int kExitResolutionError = 4;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

std::string resolve_outdir(const RunConfig& cfg) {
    if (const char* env = std::getenv("NVSCATTER_OUT"); env && *env) return env;
    return cfg.outdir;
}

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

int cmd_forward(const RunConfig& cfg) {
    const std::string out = resolve_outdir(cfg);
    ensure_dir(out);
    ComplexField u = cfg.build_u();
    std::vector<NodeDiagnostic> diag;
    ScatteringData r = forward_R(u, cfg.kgrid(), cfg.solver, &diag);
    write_nvf1(out + "/u_input.nvf", u);
    save_scattering(out + "/r.nvf", r);
    write_csv(out + "/r.csv", r.field);
    write_diagnostics_csv(out + "/forward_diag.csv", diag);
    std::printf("forward: wrote %s/r.nvf (decay diagnostic %s)\n", out.c_str(),
                fmt(decay_diagnostic(r)).c_str());
    return kExitOk;
}

int cmd_inverse(const RunConfig& cfg) {
    if (cfg.source != "file")
        throw FormatError("inverse: set input.source = file with input.file = <r.nvf>");
    const std::string out = resolve_outdir(cfg);
    ensure_dir(out);
    ScatteringData r = load_scattering(cfg.input_file);
    std::vector<NodeDiagnostic> diag;
    ComplexField u = inverse_I(r, cfg.zgrid(), cfg.solver, &diag);
    write_nvf1(out + "/u_reconstructed.nvf", u);
    write_csv(out + "/u_reconstructed.csv", u);
    write_diagnostics_csv(out + "/inverse_diag.csv", diag);
    std::printf("inverse: wrote %s/u_reconstructed.nvf\n", out.c_str());
    return kExitOk;
}

int cmd_roundtrip(const RunConfig& cfg) {
    const std::string out = resolve_outdir(cfg);
    ensure_dir(out);
    ComplexField u0 = cfg.build_u();
    ScatteringData r = forward_R(u0, cfg.kgrid(), cfg.solver);
    ComplexField u1 = inverse_I(r, cfg.zgrid(), cfg.solver);
    const double err = rel_l2_error(u1, u0);
    write_nvf1(out + "/u_input.nvf", u0);
    save_scattering(out + "/r.nvf", r);
    write_nvf1(out + "/u_roundtrip.nvf", u1);
    write_keyvalue(out + "/roundtrip_report.txt", {{"rel_l2_error", fmt(err)}});
    std::printf("roundtrip: relative L2 error %s\n", fmt(err).c_str());
    return kExitOk;
}

int cmd_miura(const RunConfig& cfg) {
    const std::string out = resolve_outdir(cfg);
    ensure_dir(out);
    std::map<std::string, std::string> report;
    if (cfg.source == "radial-bump" || cfg.source == "two-bump") {
        MiuraDatum datum = conductivity_to_u(cfg.build_gamma(), 1e-3, cfg.consistency_tol);
        write_nvf1(out + "/gamma.nvf", datum.gamma);
        write_nvf1(out + "/phi.nvf", datum.phi);
        write_nvf1(out + "/u.nvf", datum.u);
        write_nvf1(out + "/q.nvf", datum.q);
        report["mean_u_re"] = fmt(datum.mean_u.real());
        report["mean_u_im"] = fmt(datum.mean_u.imag());
        report["symmetry_defect"] = fmt(datum.symmetry_defect);
    } else {
        ComplexField u = cfg.build_u();
        ComplexField q = miura_map(u);
        const auto [mu, sym] = check_domain(u);
        write_nvf1(out + "/u.nvf", u);
        write_nvf1(out + "/q.nvf", q);
        report["mean_u_re"] = fmt(mu.real());
        report["mean_u_im"] = fmt(mu.imag());
        report["symmetry_defect"] = fmt(sym);
    }
    write_keyvalue(out + "/miura_report.txt", report);
    std::printf("miura: wrote fields and report to %s\n", out.c_str());
    return kExitOk;
}

int cmd_evolve(const RunConfig& cfg, bool force, bool compare_schrodinger) {
    const std::string out = resolve_outdir(cfg);
    ensure_dir(out);
    ComplexField u0 = cfg.build_u();
    const auto [mean_u, sym] = check_domain(u0);
    const bool nv_flavor = cfg.flavor == EvolutionFlavor::nv_schrodinger_cubic;
    if (nv_flavor && !force) {
        ComplexField du = d(u0);
        const double dscale = std::max(max_abs(du), 1e-300);
        if (sym > 1e-8 * dscale || std::abs(mean_u) > 1e-8 * std::max(l1_norm(u0), 1e-300))
            throw FormatError(
                "evolve: initial data fails the Miura-domain check (use --force to override)");
    }
    EvolutionPlan plan{cfg.times, cfg.flavor};

    std::vector<ComplexField> traj;
    if (nv_flavor)
        traj = solve_nv(u0, cfg.kgrid(), plan, cfg.solver);
    else
        traj = solve_mnv(u0, cfg.kgrid(), plan, cfg.solver);
    write_trajectory(out, nv_flavor ? "q" : "u", cfg.times, traj);

    // conserved-quantity table
    std::FILE* fp = std::fopen((out + "/conserved.csv").c_str(), "w");
    if (!fp) throw FormatError("cannot open conserved.csv");
    std::fputs("t,mass_re,mass_im,l2,symmetry_defect\n", fp);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const cx mass = integral(traj[i]);
        const auto [mu, sd] = check_domain(traj[i]);
        (void)mu;
        std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g\n", cfg.times[i], mass.real(),
                     mass.imag(), l2_norm(traj[i]), sd);
    }
    std::fclose(fp);

    if (compare_schrodinger) {
        if (!nv_flavor)
            throw FormatError("evolve: --compare-schrodinger needs evolve.flavor = nv");
        std::vector<ComplexField> alt =
            nv_via_schrodinger(u0, cfg.kgrid(), plan, cfg.solver, cfg.smallk_bound);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i)
            worst = std::max(worst, rel_l2_error(alt[i], traj[i]));
        write_trajectory(out, "q_schrodinger", cfg.times, alt);
        write_keyvalue(out + "/two_path_report.txt", {{"max_rel_l2_discrepancy", fmt(worst)}});
        std::printf("evolve: two-path max relative discrepancy %s\n", fmt(worst).c_str());
    }
    std::printf("evolve: wrote %zu time points to %s\n", traj.size(), out.c_str());
    return kExitOk;
}

int cmd_oracle_compare(const RunConfig& cfg) {
    const std::string out = resolve_outdir(cfg);
    ensure_dir(out);
    ComplexField u0 = cfg.build_u();
    const double t_end = cfg.times.back();
    EvolutionPlan plan{{t_end}, EvolutionFlavor::mnv_cubic};
    std::vector<ComplexField> ist = solve_mnv(u0, cfg.kgrid(), plan, cfg.solver);
    StepperConfig scfg(cfg.oracle_dt, u0.grid, cfg.scheme, cfg.oracle_dealias);
    ComplexField direct = step_mnv(u0, scfg, t_end);
    const double err = rel_l2_error(ist[0], direct);
    write_nvf1(out + "/u_ist.nvf", ist[0]);
    write_nvf1(out + "/u_direct.nvf", direct);
    write_keyvalue(out + "/oracle_report.txt",
                   {{"t", fmt(t_end)}, {"rel_l2_discrepancy", fmt(err)}});
    std::printf("oracle-compare: t=%s relative L2 discrepancy %s\n", fmt(t_end).c_str(),
                fmt(err).c_str());
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
    const std::string out = resolve_outdir(cfg);
    ensure_dir(out);
    std::map<std::string, std::string> report;
    bool all_pass = true;
    auto check = [&](const std::string& name, double value, double bound) {
        const bool pass = value <= bound;
        all_pass = all_pass && pass;
        report[name] = fmt(value) + (pass ? " pass" : " FAIL") + " (bound " + fmt(bound) + ")";
        std::printf("%-28s %s  measured %s  bound %s\n", name.c_str(), pass ? "pass" : "FAIL",
                    fmt(value).c_str(), fmt(bound).c_str());
    };

    const Grid zg = cfg.zgrid();
    ComplexField u = cfg.build_u();

    // spectral calculus basics
    ComplexField probe = make_field(zg, [&](cx z) {
        return std::exp(-std::norm(z) / 2.0) * (1.0 + 0.3 * z);
    });
    ComplexField back = dbar(cauchy_P(probe));
    ComplexField target{zg, probe.data - mean(probe)};
    check("cauchy_inverse", rel_l2_error(back, target), 1e-10);
    ComplexField zm{zg, probe.data - mean(probe)};
    check("beurling_isometry", std::abs(l2_norm(beurling(zm)) / l2_norm(zm) - 1.0), 1e-12);

    // Miura consistency on the configured conductivity (when there is one)
    if (cfg.source == "radial-bump" || cfg.source == "two-bump") {
        MiuraDatum datum = conductivity_to_u(cfg.build_gamma(), 1e-3, cfg.consistency_tol);
        ComplexField sqrtg{zg, datum.gamma.data.real().sqrt().cast<cx>()};
        ComplexField lap = laplacian(sqrtg);
        ComplexField q_ref{zg, lap.data / sqrtg.data};
        check("miura_consistency", rel_l2_error(datum.q, q_ref), 1e-8);
    }

    // DSII round trip
    ScatteringData r = forward_R(u, cfg.kgrid(), cfg.solver);
    ComplexField u_rt = inverse_I(r, zg, cfg.solver);
    check("roundtrip_dsii", rel_l2_error(u_rt, u), 5e-3);

    // Miura intertwining of the two forward transforms
    ScatteringData t_direct =
        forward_T(u, cfg.kgrid(), cfg.solver, nullptr, cfg.test_break_phase);
    ScatteringData t_mapped = intertwine_r_to_t(r);
    const Grid kg = t_direct.field.grid;
    double worst = 0.0;
    const double kmax_band = std::min(3.0, 0.5 * cfg.K_max);
    for (int iy = 0; iy < kg.n; ++iy)
        for (int ix = 0; ix < kg.n; ++ix) {
            const double ak = std::abs(kg.node(ix, iy));
            if (ak < 0.5 || ak > kmax_band) continue;
            const double denom = std::max(std::abs(t_mapped.field.at(ix, iy)),
                                          1e-6 * max_abs(t_mapped.field));
            worst = std::max(worst,
                             std::abs(t_direct.field.at(ix, iy) - t_mapped.field.at(ix, iy)) /
                                 denom);
        }
    check("intertwining_forward", worst, 1e-2);

    // Q∘T = id and the inverse-side intertwining
    ComplexField q = miura_map(u);
    ComplexField q_qt = inverse_Q(t_direct, zg, cfg.solver, cfg.smallk_bound);
    check("qt_roundtrip", rel_l2_error(q_qt, q), 2e-2);
    ComplexField q_mapped = inverse_Q(t_mapped, zg, cfg.solver, cfg.smallk_bound);
    check("intertwining_inverse", rel_l2_error(q_mapped, q), 2e-2);

    // Appendix machinery
    ComplexField rhs = residue_rhs(u);
    ComplexField d3 = d_pow(u, 3);
    ComplexField db3 = dbar_pow(u, 3);
    ComplexField nl = eval_NL_mnv(u);
    ComplexField defect{zg, rhs.data + d3.data + db3.data + nl.data};
    check("residue_identity", l2_norm(defect) / (l2_norm(d3) + l2_norm(nl)), 1e-4);
    BracketOrderSums sums = residue_bracket_sums(u);
    double fifth = 0.0;
    if (sums.t1.count(5))
        fifth = std::max(fifth, l2_norm(sums.t1.at(5)) / std::max(sums.t1_max_member.at(5), 1e-300));
    if (sums.t2.count(5))
        fifth = std::max(fifth, l2_norm(sums.t2.at(5)) / std::max(sums.t2_max_member.at(5), 1e-300));
    check("fifth_order_cancellation", fifth, 1e-6);
    save_coefficients(out, "expansion", nu_coeffs(u));
    save_coefficients(out, "expansion", nu_sharp_coeffs(u));

    // evolution multipliers
    ScatteringData r1 = evolve_r(r, 0.37);
    double mod_drift = (r1.field.data.abs() - r.field.data.abs()).abs().maxCoeff();
    ScatteringData r2 = evolve_r(evolve_r(r, 0.17), 0.2);
    double additivity = max_abs({kg, r2.field.data - r1.field.data}) /
                        std::max(max_abs(r.field), 1e-300);
    check("evolution_unimodularity", mod_drift, 1e-14);
    check("evolution_group_property", additivity, 1e-12);

    write_keyvalue(out + "/verify_report.txt", report);
    std::printf("verify: %s\n", all_pass ? "all identities pass" : "IDENTITY FAILURE");
    return all_pass ? kExitOk : kExitIdentityFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inverse-scattering solver for the mNV and zero-energy NV equations"};
    app.require_subcommand(1);
    std::string config_path;
    int threads = 0;
    bool force = false, compare_schrodinger = false;
    app.add_option("--config", config_path, "key=value config file")->required();
    app.add_option("--threads", threads, "worker thread cap (0 = hardware)");
    app.add_flag("--force", force, "skip the Miura-domain gate on evolve");
    app.add_flag("--compare-schrodinger", compare_schrodinger,
                 "also run the Schrodinger-side NV path and report the discrepancy");

    auto* sub_forward = app.add_subcommand("forward", "potential -> DSII scattering data");
    auto* sub_inverse = app.add_subcommand("inverse", "DSII scattering data -> potential");
    auto* sub_roundtrip = app.add_subcommand("roundtrip", "forward then inverse, report error");
    auto* sub_evolve = app.add_subcommand("evolve", "IST time evolution (mNV or NV)");
    auto* sub_verify = app.add_subcommand("verify", "run the identity suite");
    auto* sub_miura = app.add_subcommand("miura", "conductivity/potential Miura data");
    auto* sub_oracle = app.add_subcommand("oracle-compare", "IST vs direct stepper");

    CLI11_PARSE(app, argc, argv);

    try {
        nv::set_thread_cap(threads);
        nv::RunConfig cfg = nv::RunConfig::load(config_path);
        if (sub_forward->parsed()) return cmd_forward(cfg);
        if (sub_inverse->parsed()) return cmd_inverse(cfg);
        if (sub_roundtrip->parsed()) return cmd_roundtrip(cfg);
        if (sub_evolve->parsed()) return cmd_evolve(cfg, force, compare_schrodinger);
        if (sub_verify->parsed()) return cmd_verify(cfg);
        if (sub_miura->parsed()) return cmd_miura(cfg);
        if (sub_oracle->parsed()) return cmd_oracle_compare(cfg);
        return kExitFormatError;
    } catch (const nv::PhaseUnderresolved& e) {
        std::fprintf(stderr, "resolution error: %s\n", e.what());
        return kExitResolutionError;
    } catch (const nv::NonConvergence& e) {
        std::fprintf(stderr, "solver failure at parameter (%.6g, %.6g): %s\n", e.param.real(),
                     e.param.imag(), e.what());
        return kExitSolverFailure;
    } catch (const nv::SingularSmallK& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kExitSolverFailure;
    } catch (const nv::Unstable& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kExitSolverFailure;
    } catch (const nv::FormatError& e) {
        std::fprintf(stderr, "format error: %s\n", e.what());
        return kExitFormatError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFormatError;
    }
}
