#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kpist/scattering.hpp"

namespace kpist {

struct ProbePoint {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    bool operator==(const ProbePoint&) const = default;
};

// Scattering data at time t; the kernel used downstream is T(k,l) e^{4it(l^3-k^3)}.
// The phase is applied lazily through phi(s) = x s - y s^2 + 4 t s^3.
struct EvolvedData {
    const ScatteringData* base = nullptr;
    double t = 0.0;
    cplx kernel(Sign s, int i, int j) const;
};

// C+ keeps nonnegative dual frequencies (Nyquist included), C- = -(the rest).
CVec cauchy_project(const CVec& f, Sign sign);

// Exact oscillatory weights for the piecewise-linear (hat) basis on the k grid at one probe.
struct PhaseWeights {
    ProbePoint point;
    int n = 0;
    double dk = 0.0;
    CVec emphi;        // e^{-i phi(k_i)}
    CVec W, WL, WR;    // int hat_j e^{i phi}, and its left / right halves
    CVec Wd, WLd, WRd; // same with an extra factor l
    CVec ca, cb;       // per cell c in [0, n-1): int (1-s) e^{i phi}, int s e^{i phi}
    CVec UA, UB, UC;   // per cell: upper-triangle integrals of the three vertex basis functions
    long panels = 0;
    double resolution = 0.0;  // max |phi'| dk over the grid
    bool resolution_flag = false;
};

PhaseWeights phase_weights(const Grid1D& grid_k, const ProbePoint& p);

// Matrix-free operators at one probe point (immutable after construction).
class RHPOperator {
public:
    RHPOperator(const ScatteringData& data, const ProbePoint& p);

    const ScatteringData& data() const { return *data_; }
    const PhaseWeights& weights() const { return w_; }
    const ProbePoint& point() const { return w_.point; }
    int n() const { return w_.n; }

    // (T+- g)(k) = int e^{i(phi(l)-phi(k))} T+-(k,l) g(l) dl
    CVec apply_T(Sign s, const CVec& g) const;
    // L2 adjoint of apply_T on the grid.
    CVec apply_T_adjoint(Sign s, const CVec& h) const;
    // Kernel i(l-k) T+-(k,l): the x-derivative of apply_T with consistent weights.
    CVec apply_Tx(Sign s, const CVec& g) const;
    // C_T g = C+(T- g) + C-(T+ g)
    CVec apply_CT(const CVec& g) const;
    CVec apply_CT_adjoint(const CVec& h) const;
    CVec apply_CTx(const CVec& g) const;
    // Power-iteration estimate of the operator norm of C_T.
    double ct_norm_estimate(int steps = 10) const;
    // Hilbert-Schmidt bounds.
    double hs_norm_T() const;
    double hs_norm_Tx() const;

private:
    const ScatteringData* data_;
    PhaseWeights w_;
    CVec apply_generic(Sign s, const CVec& g, bool deriv) const;
};

double grid_l2(const CVec& f, double d);

struct RHPSolution {
    ProbePoint point;
    CVec mu_minus_1;
    CVec dmu_dx;
    double residual_mu = 0.0;
    double residual_dmu = 0.0;
    int iterations = 0;
    int iterations_dmu = 0;
    double ct1_norm = 0.0;   // ||C_T(1)||_2
    double ctx1_norm = 0.0;  // ||C_{dT/dx}(1)||_2
    std::vector<double> ratio_history;
};

struct RHPSettings {
    double tol = 1e-10;
    int max_iter = 200;
};

// mu - 1 = (I - C_T)^{-1} C_T(1) by Neumann iteration from an optional initial guess.
RHPSolution solve_mul(const RHPOperator& op, const RHPSettings& s = {}, const CVec* initial = nullptr);
// d_x mu = (I - C_T)^{-1} C_{dT/dx}(mu), filled into sol.
void solve_dmul_dx(const RHPOperator& op, RHPSolution& sol, const RHPSettings& s = {},
                   const CVec* initial = nullptr);
// mu - 1 = 0 and d_x mu = 0, as returned for T+- = 0 without building the operator.
RHPSolution zero_rhp_solution(const ScatteringData& data, const ProbePoint& p);
RHPSolution solve_rhp(const ScatteringData& data, const ProbePoint& p, const RHPSettings& s = {},
                      const RHPSolution* warm = nullptr);

// Largest singular value of (I - T-)(I + (T+)^*) - I at t = 0, dense plain-trapezoid kernels
// (stored half diagonal).
double adjoint_identity_check(const ScatteringData& data, double x, double y, int power_steps = 60);

void write_rhp_solutions(const std::string& dir, const std::vector<RHPSolution>& sols);

}  // namespace kpist
