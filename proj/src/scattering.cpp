#include "nvscatter/scattering.hpp"

#include <cmath>
#include <cstdio>

#include "nvscatter/errors.hpp"
#include "nvscatter/io.hpp"
#include "nvscatter/norms.hpp"
#include "nvscatter/parallel.hpp"
#include "nvscatter/spectral.hpp"

namespace nv {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

double outer_decay_norm(const ComplexField& f) {
    const Grid& g = f.grid;
    const double half = 0.5 * g.L;
    double acc = 0.0;
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const double kk = std::norm(g.node(ix, iy));
            if (std::sqrt(kk) >= half) acc += kk * kk * std::norm(f.at(ix, iy));
        }
    return g.h() * std::sqrt(acc);
}

}  // namespace

ScatteringData forward_R(const ComplexField& u, const Grid& kgrid, const SolverConfig& cfg,
                         std::vector<NodeDiagnostic>* diag) {
    cfg.validate();
    const Grid zg = u.grid;
    Grid kg = kgrid;
    kg.role = GridRole::spectral;
    ScatteringData out;
    out.field = ComplexField(kg);
    out.kind = ScatterKind::dsii_r;
    if (diag) diag->assign(kg.size(), {});

    const double quad = -zg.h() * zg.h() / kPi;
    parallel_for(kg.size(), [&](std::size_t idx) {
        const int iy = static_cast<int>(idx) / kg.n;
        const int ix = static_cast<int>(idx) % kg.n;
        const cx k = kg.node(ix, iy);
        ComplexField ek = ek_phase(zg, k);
        Eigen::ArrayXcd E = 0.5 * ek.data * u.data;
        CgoSolution sol = solve_pair_kernel(zg, E, cfg, k);
        out.field.data[idx] = quad * (ek.data * u.data * sol.first.data.conjugate()).sum();
        if (diag) (*diag)[idx] = {k, sol.iterations, sol.residual};
    });

    out.source_norms["l2"] = l2_norm(u);
    out.source_norms["h11"] = sobolev_norm(u, {1, 1});
    out.source_norms["h21"] = sobolev_norm(u, {2, 1});
    out.decay_outer = outer_decay_norm(out.field);
    return out;
}

ComplexField inverse_I(const ScatteringData& r, const Grid& zgrid, const SolverConfig& cfg,
                       std::vector<NodeDiagnostic>* diag) {
    cfg.validate();
    if (r.kind != ScatterKind::dsii_r)
        throw std::invalid_argument("inverse_I: scattering data is not of kind dsii_r");
    const Grid kg = r.field.grid;
    Grid zg = zgrid;
    zg.role = GridRole::physical;
    ComplexField u(zg);
    if (diag) diag->assign(zg.size(), {});

    const double quad = -kg.h() * kg.h() / kPi;
    parallel_for(zg.size(), [&](std::size_t idx) {
        const int iy = static_cast<int>(idx) / zg.n;
        const int ix = static_cast<int>(idx) % zg.n;
        const cx z = zg.node(ix, iy);
        ComplexField ez = ek_phase(kg, z);  // e_k(z) over the k-grid
        Eigen::ArrayXcd E = 0.5 * ez.data * r.field.data.conjugate();
        CgoSolution sol = solve_pair_kernel(kg, E, cfg, z);
        // e_{−k}(z) = conj(e_k(z))
        u.data[idx] = quad * (ez.data.conjugate() * r.field.data * sol.first.data).sum();
        if (diag) (*diag)[idx] = {z, sol.iterations, sol.residual};
    });
    return u;
}

double decay_diagnostic(const ScatteringData& r) {
    const Grid& g = r.field.grid;
    ComplexField weighted(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix)
            weighted.at(ix, iy) = std::norm(g.node(ix, iy)) * r.field.at(ix, iy);
    return l2_norm(weighted);
}

void save_scattering(const std::string& path, const ScatteringData& s) {
    write_nvf1(path, s.field);
    std::map<std::string, std::string> kv;
    kv["kind"] = s.kind == ScatterKind::dsii_r ? "dsii_r" : "schrodinger_t";
    kv["kmax"] = std::to_string(s.kmax());
    char buf[64];
    for (const auto& [name, value] : s.source_norms) {
        std::snprintf(buf, sizeof buf, "%.17g", value);
        kv["source_" + name] = buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", s.decay_outer);
    kv["decay_outer"] = buf;
    write_keyvalue(path + ".meta", kv);
}

ScatteringData load_scattering(const std::string& path) {
    ScatteringData s;
    s.field = read_nvf1(path);
    if (s.field.grid.role != GridRole::spectral)
        throw FormatError("scattering payload must carry the spectral role: " + path);
    auto kv = read_keyvalue(path + ".meta");
    const auto it = kv.find("kind");
    if (it == kv.end()) throw FormatError("missing kind in sidecar: " + path + ".meta");
    if (it->second == "dsii_r")
        s.kind = ScatterKind::dsii_r;
    else if (it->second == "schrodinger_t")
        s.kind = ScatterKind::schrodinger_t;
    else
        throw FormatError("unknown kind in sidecar: " + it->second);
    for (const auto& [k, v] : kv)
        if (k.rfind("source_", 0) == 0) s.source_norms[k.substr(7)] = std::stod(v);
    if (kv.count("decay_outer")) s.decay_outer = std::stod(kv["decay_outer"]);
    return s;
}

void write_diagnostics_csv(const std::string& path, const std::vector<NodeDiagnostic>& diag) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw FormatError("cannot open for writing: " + path);
    std::fputs("k_re,k_im,iterations,residual\n", fp);
    for (const auto& d : diag)
        std::fprintf(fp, "%.17g,%.17g,%d,%.17g\n", d.param.real(), d.param.imag(), d.iterations,
                     d.residual);
    std::fclose(fp);
}

}  // namespace nv
