#pragma once

#include <map>
#include <string>

#include "nvscatter/field.hpp"

namespace nv {

/// NVF1 field file: magic "NVF1", u32-le n, f64-le L, u8 role, 7 zero bytes,
/// then n² (re, im) f64-le pairs row-major. Bit-exact by construction.
void write_nvf1(const std::string& path, const ComplexField& f);
ComplexField read_nvf1(const std::string& path);

/// CSV export with columns x1,x2,re,im at 17 significant digits.
void write_csv(const std::string& path, const ComplexField& f);

/// Flat key=value sidecar (one `key = value` per line, '#' comments).
void write_keyvalue(const std::string& path, const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> read_keyvalue(const std::string& path);

}  // namespace nv
