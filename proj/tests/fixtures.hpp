#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kpist/oracle.hpp"
#include "kpist/reconstruction.hpp"

namespace kpist::fixtures {

// Reference profile: gaussian_dx, width 2, box [-32, 32]^2.
Grid1D reference_grid(int n = 256);
PotentialField reference_potential(double eps, int n = 256);
PotentialField zero_potential(int n = 128);
// Reference profile on the smaller box [-16, 16]^2 with n points per axis.
PotentialField small_box_potential(double eps, int n);

// Cached runs keyed by (eps, n_k); n_k = 0 means n_x. reference_data keeps only the data.
const ScatteringRun& reference_run(double eps, int n_k = 0);
const ScatteringData& reference_data(double eps, int n_k = 0);
const ScatteringData& zero_data();
// Cached pseudospectral evolution of the reference potential.
const EvolveResult& reference_evolution(double eps, double t);

// Adaptive Gauss-Kronrod (7/15) with absolute tolerance.
cplx adaptive_integral(const std::function<cplx(double)>& f, double a, double b, double tol, int max_depth = 18);

// Open-form oracles for the cubic-phase integrals (contour deformation, Gauss-Kronrod).
cplx open_cubic_phase(double a, double t, double xi);
cplx open_half_airy(double t, double a, double xi, double k_lower);
// Ai by its Maclaurin series in long double.
double airy_maclaurin(double x);

double rel_l2(const CVec& a, const CVec& b);
double max_abs(const CVec& v);

// Deterministic band-limited random vector on n points.
CVec random_band_limited(int n, unsigned seed, int band = 0);

std::string temp_dir(const std::string& tag);

}  // namespace kpist::fixtures
