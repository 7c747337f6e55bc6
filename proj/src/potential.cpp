#include "kpist/potential.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kpist/io.hpp"

namespace kpist {

std::string to_string(PotentialKind k) { return k == PotentialKind::gaussian_dx ? "gaussian_dx" : "cosine_packet"; }

PotentialKind potential_kind_from_string(const std::string& s) {
    if (s == "gaussian_dx") return PotentialKind::gaussian_dx;
    if (s == "cosine_packet") return PotentialKind::cosine_packet;
    throw std::invalid_argument("unknown potential kind: " + s);
}

double PotentialField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

void PotentialField::validate() const {
    grid_x.validate();
    grid_y.validate();
    if (values.size() != static_cast<size_t>(grid_x.n) * grid_y.n)
        throw std::invalid_argument("potential: value count does not match the grid");
    for (int i = 0; i < grid_x.n; ++i)
        for (int j = 0; j < grid_y.n; ++j)
            if (!std::isfinite(at(i, j))) {
                std::ostringstream os;
                os << "potential: non-finite value at grid index (" << i << ", " << j << ")";
                throw std::invalid_argument(os.str());
            }
    const double m = max_abs();
    for (int j = 0; j < grid_y.n; ++j) {
        double s = 0.0;
        for (int i = 0; i < grid_x.n; ++i) s += at(i, j);
        if (std::abs(s / grid_x.n) > 1e-12 * m) {
            std::ostringstream os;
            os << "potential: x-mean of row y-index " << j << " is " << s / grid_x.n << " (not zero-mean)";
            throw std::invalid_argument(os.str());
        }
    }
}

PotentialField make_test_potential(PotentialKind kind, double amplitude, double width, const Grid1D& gx,
                                   const Grid1D& gy, double k0) {
    if (!(amplitude >= 0.0) || !(width > 0.0)) throw std::invalid_argument("potential: amplitude >= 0 and width > 0 required");
    gx.validate();
    gy.validate();
    if (width / gx.spacing() < 8.0 || width / gy.spacing() < 8.0)
        throw std::invalid_argument("potential: grid too coarse, fewer than 8 points per width");
    PotentialField u;
    u.grid_x = gx;
    u.grid_y = gy;
    u.amplitude = amplitude;
    u.kind = to_string(kind);
    u.width = width;
    u.k0 = kind == PotentialKind::cosine_packet ? k0 : 0.0;
    u.values.assign(static_cast<size_t>(gx.n) * gy.n, 0.0);
    const double w2 = width * width;
    const double shift = std::exp(-0.5 * k0 * k0 * w2);
    for (int i = 0; i < gx.n; ++i) {
        const double x = gx.point(i);
        for (int j = 0; j < gy.n; ++j) {
            const double y = gy.point(j);
            const double g = std::exp(-(x * x + y * y) / (2.0 * w2));
            double v;
            if (kind == PotentialKind::gaussian_dx)
                v = -amplitude * x / w2 * g;
            else
                v = amplitude * (std::cos(k0 * x) - shift) * g;
            u.values[static_cast<size_t>(i) * gy.n + j] = v;
        }
    }
    // Remove the O(1e-16) discrete x-mean left by rounding so the invariant holds on any grid.
    for (int j = 0; j < gy.n; ++j) {
        double s = 0.0;
        for (int i = 0; i < gx.n; ++i) s += u.values[static_cast<size_t>(i) * gy.n + j];
        const double mean = s / gx.n;
        for (int i = 0; i < gx.n; ++i) u.values[static_cast<size_t>(i) * gy.n + j] -= mean;
    }
    return u;
}

std::string strip_extension(const std::string& path) {
    for (const char* ext : {".json", ".bin"}) {
        const std::string e(ext);
        if (path.size() > e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0)
            return path.substr(0, path.size() - e.size());
    }
    return path;
}

void write_potential(const std::string& base, const PotentialField& u) {
    write_f64_blob(base + ".bin", u.values);
    json j{{"format", "kpist-potential-v1"},
           {"layout", "row-major f64 little-endian, x slow, y fast"},
           {"grid_x", grid_to_json(u.grid_x)},
           {"grid_y", grid_to_json(u.grid_y)},
           {"amplitude", u.amplitude},
           {"kind", u.kind},
           {"width", u.width},
           {"k0", u.k0}};
    write_json(base + ".json", j);
}

PotentialField read_potential(const std::string& path) {
    const std::string base = strip_extension(path);
    json j = read_json(base + ".json");
    PotentialField u;
    u.grid_x = grid_from_json(j.at("grid_x"));
    u.grid_y = grid_from_json(j.at("grid_y"));
    u.amplitude = j.value("amplitude", 0.0);
    u.kind = j.value("kind", std::string("custom"));
    u.width = j.value("width", 0.0);
    u.k0 = j.value("k0", 0.0);
    u.values = read_f64_blob(base + ".bin", static_cast<size_t>(u.grid_x.n) * u.grid_y.n);
    u.validate();
    return u;
}

}  // namespace kpist
