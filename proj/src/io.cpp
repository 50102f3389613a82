#include "nvscatter/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "nvscatter/errors.hpp"

namespace nv {

namespace {

void put_u32le(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64le(std::ostream& os, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32le(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

double get_f64le(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= std::uint64_t(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

}  // namespace

void write_nvf1(const std::string& path, const ComplexField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open for writing: " + path);
    os.write("NVF1", 4);
    put_u32le(os, static_cast<std::uint32_t>(f.grid.n));
    put_f64le(os, f.grid.L);
    const char role = f.grid.role == GridRole::spectral ? 1 : 0;
    os.write(&role, 1);
    const char pad[7] = {0, 0, 0, 0, 0, 0, 0};
    os.write(pad, 7);
    for (Eigen::Index i = 0; i < f.data.size(); ++i) {
        put_f64le(os, f.data[i].real());
        put_f64le(os, f.data[i].imag());
    }
    if (!os) throw FormatError("short write: " + path);
}

ComplexField read_nvf1(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "NVF1", 4) != 0)
        throw FormatError("bad NVF1 magic in " + path);
    const std::uint32_t n = get_u32le(is);
    const double L = get_f64le(is);
    char role;
    is.read(&role, 1);
    char pad[7];
    is.read(pad, 7);
    if (!is || (role != 0 && role != 1)) throw FormatError("bad NVF1 header in " + path);
    Grid g;
    try {
        g = Grid(static_cast<int>(n), L, role == 1 ? GridRole::spectral : GridRole::physical);
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("bad NVF1 grid in ") + path + ": " + e.what());
    }
    ComplexField f(g);
    for (Eigen::Index i = 0; i < f.data.size(); ++i) {
        const double re = get_f64le(is);
        const double im = get_f64le(is);
        f.data[i] = {re, im};
    }
    if (!is) throw FormatError("truncated NVF1 payload in " + path);
    return f;
}

void write_csv(const std::string& path, const ComplexField& f) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw FormatError("cannot open for writing: " + path);
    std::fputs("x1,x2,re,im\n", fp);
    const Grid& g = f.grid;
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const cx v = f.at(ix, iy);
            std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g\n", g.coord(ix), g.coord(iy), v.real(),
                         v.imag());
        }
    std::fclose(fp);
}

void write_keyvalue(const std::string& path, const std::map<std::string, std::string>& kv) {
    std::ofstream os(path);
    if (!os) throw FormatError("cannot open for writing: " + path);
    for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
}

std::map<std::string, std::string> read_keyvalue(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot open: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        if (!key.empty()) kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

}  // namespace nv
