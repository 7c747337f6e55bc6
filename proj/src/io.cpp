#include "kpist/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace kpist {

namespace {

void write_raw(const std::string& path, const double* p, size_t count) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    for (size_t i = 0; i < count; ++i) {
        uint64_t b;
        std::memcpy(&b, p + i, 8);
        if constexpr (std::endian::native == std::endian::big) b = __builtin_bswap64(b);
        f.write(reinterpret_cast<const char*>(&b), 8);
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

void read_raw(const std::string& path, double* p, size_t count) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f) throw std::runtime_error("cannot open: " + path);
    const auto size = static_cast<size_t>(f.tellg());
    if (size != count * 8)
        throw std::runtime_error(path + ": expected " + std::to_string(count * 8) + " bytes, found " +
                                 std::to_string(size));
    f.seekg(0);
    for (size_t i = 0; i < count; ++i) {
        uint64_t b;
        f.read(reinterpret_cast<char*>(&b), 8);
        if constexpr (std::endian::native == std::endian::big) b = __builtin_bswap64(b);
        std::memcpy(p + i, &b, 8);
    }
    if (!f) throw std::runtime_error("read failed: " + path);
}

}  // namespace

void write_f64_blob(const std::string& path, const RVec& v) { write_raw(path, v.data(), v.size()); }

RVec read_f64_blob(const std::string& path, size_t expected_count) {
    RVec v(expected_count);
    read_raw(path, v.data(), expected_count);
    return v;
}

void write_c128_blob(const std::string& path, const CVec& v) {
    write_raw(path, reinterpret_cast<const double*>(v.data()), 2 * v.size());
}

CVec read_c128_blob(const std::string& path, size_t expected_count) {
    CVec v(expected_count);
    read_raw(path, reinterpret_cast<double*>(v.data()), 2 * expected_count);
    return v;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

json grid_to_json(const Grid1D& g) { return json{{"min", g.min}, {"max", g.max}, {"n", g.n}}; }

Grid1D grid_from_json(const json& j) {
    Grid1D g{j.at("min").get<double>(), j.at("max").get<double>(), j.at("n").get<int>()};
    g.validate();
    return g;
}

std::string fmt_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace kpist
