#include "nvscatter/runconfig.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nvscatter/errors.hpp"
#include "nvscatter/io.hpp"
#include "nvscatter/spectral.hpp"

namespace nv {

namespace {

std::map<std::string, std::string> parse_sectioned(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot open config: " + path);
    std::map<std::string, std::string> kv;
    std::string line, section;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw FormatError("config line without '=': " + line);
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw FormatError("config line with empty key: " + line);
        kv[(section.empty() ? key : section + "." + key)] = trim(t.substr(eq + 1));
    }
    return kv;
}

double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw FormatError("config: bad number for " + key + ": '" + s + "'");
    }
}

int to_int(const std::string& s, const std::string& key) {
    const double v = to_double(s, key);
    const int i = static_cast<int>(v);
    if (i != v) throw FormatError("config: bad integer for " + key + ": '" + s + "'");
    return i;
}

bool to_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw FormatError("config: bad boolean for " + key + ": '" + s + "'");
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
    auto kv = parse_sectioned(path);
    RunConfig c;
    auto take = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        return &it->second;
    };
    if (auto* v = take("grid.n_z")) c.n_z = to_int(*v, "grid.n_z");
    if (auto* v = take("grid.L_z")) c.L_z = to_double(*v, "grid.L_z");
    if (auto* v = take("grid.n_k")) c.n_k = to_int(*v, "grid.n_k");
    if (auto* v = take("grid.K_max")) c.K_max = to_double(*v, "grid.K_max");
    if (auto* v = take("solver.tol")) c.solver.tol = to_double(*v, "solver.tol");
    if (auto* v = take("solver.max_iter")) c.solver.max_iter = to_int(*v, "solver.max_iter");
    if (auto* v = take("solver.strategy")) {
        if (*v == "neumann")
            c.solver.strategy = SolveStrategy::neumann;
        else if (*v == "krylov")
            c.solver.strategy = SolveStrategy::krylov_realified;
        else
            throw FormatError("config: unknown solver.strategy '" + *v + "'");
    }
    if (auto* v = take("solver.smallk_bound")) c.smallk_bound = to_double(*v, "solver.smallk_bound");
    if (auto* v = take("input.source")) c.source = *v;
    if (auto* v = take("input.file")) c.input_file = *v;
    if (auto* v = take("input.amplitude")) c.amplitude = to_double(*v, "input.amplitude");
    if (auto* v = take("input.radius")) c.radius = to_double(*v, "input.radius");
    if (auto* v = take("input.center_x")) c.center_x = to_double(*v, "input.center_x");
    if (auto* v = take("input.center_y")) c.center_y = to_double(*v, "input.center_y");
    if (auto* v = take("input.amplitude2")) c.amplitude2 = to_double(*v, "input.amplitude2");
    if (auto* v = take("input.radius2")) c.radius2 = to_double(*v, "input.radius2");
    if (auto* v = take("input.center2_x")) c.center2_x = to_double(*v, "input.center2_x");
    if (auto* v = take("input.center2_y")) c.center2_y = to_double(*v, "input.center2_y");
    if (auto* v = take("input.scale")) c.scale = to_double(*v, "input.scale");
    if (auto* v = take("input.consistency_tol"))
        c.consistency_tol = to_double(*v, "input.consistency_tol");
    if (auto* v = take("evolve.times")) {
        c.times.clear();
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ','))
            c.times.push_back(to_double(item, "evolve.times"));
    }
    if (auto* v = take("evolve.flavor")) {
        if (*v == "mnv")
            c.flavor = EvolutionFlavor::mnv_cubic;
        else if (*v == "nv" || *v == "nv-schrodinger")
            c.flavor = EvolutionFlavor::nv_schrodinger_cubic;
        else
            throw FormatError("config: unknown evolve.flavor '" + *v + "'");
    }
    if (auto* v = take("oracle.dt")) c.oracle_dt = to_double(*v, "oracle.dt");
    if (auto* v = take("oracle.scheme")) {
        if (*v == "etd_rk4")
            c.scheme = StepScheme::etd_rk4;
        else if (*v == "rk4_if")
            c.scheme = StepScheme::rk4_integrating_factor;
        else
            throw FormatError("config: unknown oracle.scheme '" + *v + "'");
    }
    if (auto* v = take("oracle.dealias")) c.oracle_dealias = to_bool(*v, "oracle.dealias");
    if (auto* v = take("output.dir")) c.outdir = *v;
    if (auto* v = take("test.break_phase")) c.test_break_phase = to_bool(*v, "test.break_phase");
    c.validate();
    return c;
}

void RunConfig::validate() const {
    zgrid();  // Grid constructors throw on bad n/L
    kgrid();
    solver.validate();
    if (!(smallk_bound > 0)) throw FormatError("config: smallk_bound must be positive");
    if (source != "radial-bump" && source != "gaussian-bump" && source != "two-bump" &&
        source != "zero" && source != "file")
        throw FormatError("config: unknown input.source '" + source + "'");
    if (source == "file" && input_file.empty())
        throw FormatError("config: input.source=file needs input.file");
    if (!(amplitude > -1.0) || !(radius > 0) || !(radius2 > 0))
        throw FormatError("config: bump parameters out of range");
    if (!std::isfinite(scale)) throw FormatError("config: bad input.scale");
    if (!(consistency_tol > 0)) throw FormatError("config: bad input.consistency_tol");
    EvolutionPlan plan{times, flavor};
    plan.validate();
    if (!(oracle_dt > 0)) throw FormatError("config: oracle.dt must be positive");
}

ComplexField RunConfig::build_gamma() const {
    const Grid zg = zgrid();
    if (source == "radial-bump")
        return radial_bump_conductivity(zg, amplitude, radius, {center_x, center_y});
    if (source == "gaussian-bump")
        return gaussian_bump_conductivity(zg, amplitude, radius, {center_x, center_y});
    if (source == "two-bump")
        return two_bump_conductivity(zg, amplitude, radius, {center_x, center_y}, amplitude2,
                                     radius2, {center2_x, center2_y});
    throw FormatError("config: input.source '" + source + "' has no conductivity");
}

ComplexField RunConfig::build_u() const {
    const Grid zg = zgrid();
    if (source == "zero") return ComplexField(zg);
    if (source == "file") {
        ComplexField u = read_nvf1(input_file);
        if (u.grid.role != GridRole::physical)
            throw FormatError("input field must carry the physical role: " + input_file);
        if (!u.all_finite()) throw FormatError("input field has non-finite samples");
        u.data *= scale;
        return u;
    }
    MiuraDatum datum = conductivity_to_u(build_gamma(), 1e-3, consistency_tol);
    datum.u.data *= scale;
    return datum.u;
}

}  // namespace nv
