#pragma once

#include <string>

#include "kpist/potential.hpp"

namespace kpist {

// u~(l; y) = (2 pi)^{-1/2} sum_x e^{-ilx} u(x, y) dx.
// Storage is y-slow: values[j * n_l + m] = u~(l_m; y_j).
struct PartialTransform {
    Grid1D grid_l;
    Grid1D grid_y;
    CVec values;

    const cplx& at(int m, int j) const { return values[static_cast<size_t>(j) * grid_l.n + m]; }
    cplx& at(int m, int j) { return values[static_cast<size_t>(j) * grid_l.n + m]; }
    const cplx* row(int j) const { return values.data() + static_cast<size_t>(j) * grid_l.n; }
    double max_abs() const;
};

// u^(p, q) = (2 pi)^{-1} sum_{x,y} e^{-i(px + qy)} u dx dy; values[m * n_q + n] (p slow).
struct FullTransform {
    Grid1D grid_p;
    Grid1D grid_q;
    CVec values;

    const cplx& at(int m, int n) const { return values[static_cast<size_t>(m) * grid_q.n + n]; }
};

struct ConditionsReport {
    double c = 0.0;
    double c_tilde = 0.0;
    double w_norm = 0.0;
    double e1w_norm = 0.0;
    bool l0_flag = false;  // u~(0, y) above 1e-8 max|u~|: the |l|^{-1} norm diverges
    bool pass = false;
    std::string diagnostic;
};

// Transform on the FFT dual grid of grid_x.
PartialTransform partial_fourier_x(const PotentialField& u);
// Transform sampled on grid_l; its spacing must be the dual spacing times a power of two
// (finer spacings use zero padding, coarser ones decimate) and its range must lie in the dual range.
PartialTransform partial_fourier_x(const PotentialField& u, const Grid1D& grid_l);
// Adjoint inverse on the dual grid; returns real parts.
RVec inverse_partial_fourier_x(const PartialTransform& ut, const Grid1D& grid_x);

FullTransform full_fourier(const PotentialField& u);
RVec inverse_full_fourier(const FullTransform& uh, const Grid1D& grid_x, const Grid1D& grid_y);

ConditionsReport check_conditions(const PotentialField& u);
ConditionsReport check_conditions(const PotentialField& u, const PartialTransform& ut);

// Norm pieces shared with diagnostics.
double l2_norm(const PotentialField& u);
double l2_norm(const PartialTransform& ut);
double l1_norm(const PartialTransform& ut);
// (sum_{l != 0} |u~|^2 / |l| dl dy)^{1/2}
double weighted_w_norm(const PartialTransform& ut);

}  // namespace kpist
