#pragma once

#include <vector>

#include "kpist/phase.hpp"
#include "kpist/rhp.hpp"

namespace kpist {

struct ReconstructionSample {
    ProbePoint point;
    RayCoordinates ray;
    RegionLabel region;
    cplx u1 = 0.0;
    cplx u2 = 0.0;
    cplx u = 0.0;
    double residual_mu = 0.0;
    double residual_dmu = 0.0;
    int iterations = 0;
    bool resolution_flag = false;
};

// u1 = (1/pi) int int e^{i(phi(l)-phi(k))} i(l-k) (T+ + T-)(k,l) dl dk with exact hat weights
// and triangle corrections on the diagonal cells.
cplx eval_u1(const ScatteringData& data, const PhaseWeights& w);
cplx eval_u1(const EvolvedData& data, double x, double y);
// u2 = (1/pi) int int e^{i(phi(l)-phi(k))} f(k,l) [i(l-k)(mu(l)-1) + d_x mu(l)] dl dk.
cplx eval_u2(const ScatteringData& data, const PhaseWeights& w, const RHPSolution& rhp);
cplx eval_u2(const EvolvedData& data, double x, double y, const RHPSolution& rhp);

struct ReconstructSettings {
    RHPSettings rhp;
    double delta = 0.05;
};

// A nonempty *warm seeds the iterations and is replaced by this probe's solution.
ReconstructionSample reconstruct(const ScatteringData& data, const ProbePoint& p, const ReconstructSettings& s = {},
                                 RHPSolution* warm = nullptr);
// Independent probes in parallel; output order follows the input.
std::vector<ReconstructionSample> reconstruct_many(const ScatteringData& data, const std::vector<ProbePoint>& probes,
                                                   const ReconstructSettings& s = {});

// Linear KP I solution by the (p,q) trapezoid on the FFT grid of u0 (p = 0 line excluded).
double linear_kp(const PotentialField& u0, double t, double x, double y);
double linear_kp(const FullTransform& uh, double t, double x, double y);
// Linear scattering data: T+ = H(l-k) T_lin, T- = -H(k-l) T_lin, diagonal halved.
ScatteringData linear_scattering_data(const PotentialField& u0, const Grid1D& grid_k);
// (k,l) route: the u1 quadrature applied to linear scattering data (whole-plane evolution).
double linear_kp_kl(const ScatteringData& lin, double t, double x, double y);

}  // namespace kpist
