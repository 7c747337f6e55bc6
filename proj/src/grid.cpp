#include "kpist/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kpist {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

RVec Grid1D::points() const {
    RVec p(n);
    for (int i = 0; i < n; ++i) p[i] = point(i);
    return p;
}

Grid1D Grid1D::dual() const {
    const double d = 2.0 * std::numbers::pi / (n * spacing());
    return Grid1D{-0.5 * n * d, 0.5 * n * d, n};
}

void Grid1D::validate() const {
    if (!(max > min)) throw std::invalid_argument("grid: max must exceed min");
    if (n < 8) throw std::invalid_argument("grid: n must be at least 8, got " + std::to_string(n));
    if (!is_power_of_two(n)) throw std::invalid_argument("grid: n must be a power of two, got " + std::to_string(n));
    if (std::abs(min + max) > 1e-12 * (max - min))
        throw std::invalid_argument("grid: must be symmetric about 0");
}

bool Grid1D::operator==(const Grid1D& o) const {
    return n == o.n && std::abs(min - o.min) <= 1e-12 * (max - min) &&
           std::abs(max - o.max) <= 1e-12 * (max - min);
}

Grid1D Grid1D::symmetric(double half_width, int n) {
    Grid1D g{-half_width, half_width, n};
    g.validate();
    return g;
}

int nearest_index(const Grid1D& g, double v, double tol) {
    const double s = (v - g.min) / g.spacing();
    const long i = std::lround(s);
    if (i < 0 || i >= g.n || std::abs(s - i) > tol) return -1;
    return static_cast<int>(i);
}

}  // namespace kpist
