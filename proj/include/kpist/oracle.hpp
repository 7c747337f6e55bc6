#pragma once

#include <vector>

#include "kpist/potential.hpp"

namespace kpist {

// Periodic-box pseudospectral state for u_t + u_xxx + 6 u u_x = 3 d_x^{-1} u_yy.
// u_hat uses the FFT layout of the row-major [x][y] field.
struct OracleState {
    Grid1D grid_x;
    Grid1D grid_y;
    CVec u_hat;
    double t = 0.0;
    double dt = 0.0;
    std::vector<unsigned char> dealias_mask;  // 1 where the mode is kept (2/3 rule, p = 0 removed)
    RVec p;                                    // wavenumber per x index (FFT order)
    RVec q;                                    // wavenumber per y index (FFT order)
};

OracleState make_oracle_state(const PotentialField& u0);
// omega(p, q) = p^3 + 3 q^2 / p on kept modes, 0 elsewhere.
double oracle_omega(double p, double q);
// Largest |omega| over the kept modes.
double oracle_max_omega(const OracleState& s);
// Step bound dt <= 0.5 / max |omega|.
double oracle_dt_bound(const OracleState& s);

// One integrating-factor RK4 (Lawson) step. Throws on non-finite spectra or a step above the bound.
void oracle_step(OracleState& s, double dt);
RVec oracle_field(const OracleState& s);
double oracle_l2(const OracleState& s);

struct EvolveResult {
    PotentialField field;
    RVec times;
    RVec l2;
    double drift = 0.0;  // max relative L2 deviation from t = 0
    int steps = 0;
};

// Evolves with n = ceil(t_final / dt) equal steps. dt <= 0 selects the step bound.
// Throws when the L2 drift exceeds drift_tol.
EvolveResult evolve(const PotentialField& u0, double t_final, double dt, double drift_tol = 1e-6);

}  // namespace kpist
