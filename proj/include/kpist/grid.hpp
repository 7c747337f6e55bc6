#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace kpist {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

// Uniform periodic-style grid with points min + i*spacing, i = 0..n-1.
struct Grid1D {
    double min = 0.0;
    double max = 0.0;
    int n = 0;

    double spacing() const { return (max - min) / n; }
    double point(int i) const { return min + i * spacing(); }
    RVec points() const;
    // Frequency grid of the FFT: spacing 2*pi/(n*spacing), symmetric, same n.
    Grid1D dual() const;
    // Throws std::invalid_argument when the invariants fail.
    void validate() const;
    bool operator==(const Grid1D& o) const;
    bool operator!=(const Grid1D& o) const { return !(*this == o); }

    static Grid1D symmetric(double half_width, int n);
};

bool is_power_of_two(int n);

// Index of the grid point closest to v; -1 when v is off the grid by more than tol*spacing.
int nearest_index(const Grid1D& g, double v, double tol = 1e-9);

}  // namespace kpist
