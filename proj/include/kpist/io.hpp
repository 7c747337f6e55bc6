#pragma once

#include <string>

#include "json.hpp"
#include "kpist/grid.hpp"

namespace kpist {

using json = nlohmann::json;

// Little-endian 64-bit float blobs; complex data are interleaved (re, im) pairs.
void write_f64_blob(const std::string& path, const RVec& v);
RVec read_f64_blob(const std::string& path, size_t expected_count);
void write_c128_blob(const std::string& path, const CVec& v);
CVec read_c128_blob(const std::string& path, size_t expected_count);

void write_json(const std::string& path, const json& j);
json read_json(const std::string& path);

json grid_to_json(const Grid1D& g);
Grid1D grid_from_json(const json& j);

// Shortest round-trip decimal text for a double (fixed, locale independent).
std::string fmt_double(double v);

}  // namespace kpist
