#pragma once

#include <string>

#include "kpist/grid.hpp"

namespace kpist {

enum class PotentialKind { gaussian_dx, cosine_packet };

std::string to_string(PotentialKind k);
PotentialKind potential_kind_from_string(const std::string& s);

// Real initial data on an (x, y) grid, row-major with x as the slow index:
// values[i * n_y + j] = u(x_i, y_j).
struct PotentialField {
    Grid1D grid_x;
    Grid1D grid_y;
    RVec values;
    double amplitude = 0.0;
    std::string kind = "custom";
    double width = 0.0;
    double k0 = 0.0;

    double at(int i, int j) const { return values[static_cast<size_t>(i) * grid_y.n + j]; }
    double max_abs() const;
    // Throws with the offending grid index on non-finite values or nonzero x-means.
    void validate() const;
};

// gaussian_dx: A * d/dx exp(-(x^2+y^2)/(2 w^2)).
// cosine_packet: A * (cos(k0 x) - exp(-k0^2 w^2 / 2)) * exp(-(x^2+y^2)/(2 w^2)).
PotentialField make_test_potential(PotentialKind kind, double amplitude, double width, const Grid1D& gx,
                                   const Grid1D& gy, double k0 = 1.0);

// Files: <base>.bin (values) and <base>.json (sidecar). `path` may name either or the base.
void write_potential(const std::string& base, const PotentialField& u);
PotentialField read_potential(const std::string& path);
std::string strip_extension(const std::string& path);

}  // namespace kpist
