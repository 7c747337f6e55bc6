#pragma once

#include <string>
#include <vector>

#include "kpist/io.hpp"
#include "kpist/transform.hpp"

namespace kpist {

// +1 for mu^+ / T^+, -1 for mu^- / T^-.
enum class Sign { plus = 1, minus = -1 };
inline int sgn(Sign s) { return static_cast<int>(s); }
std::string to_string(Sign s);

struct ScatteringSettings {
    int n_k = 0;              // 0: same as n_x; the k/l grid always spans the x-dual range
    double tol = 1e-10;
    int max_iter = 200;
    double y_cutoff = 1e-14;  // y rows with max|u~| below cutoff*max are dropped
};

// y-rows of the potential kept for the y-integrals: indices [first, first + count).
struct YWindow {
    int first = 0;
    int count = 0;
    double y0 = 0.0;
    double dy = 0.0;
    double point(int j) const { return y0 + j * dy; }
};

YWindow y_window(const PartialTransform& ut, double cutoff);
// The k and l grid used by the scattering map: [-pi/dx, pi/dx) with n_k points.
Grid1D spectral_grid(const PotentialField& u, int n_k);

// u~ on the spectral grid restricted to the y window; rows y-slow: row(j)[m].
struct SpectralPotential {
    Grid1D grid_l;
    YWindow yw;
    CVec values;  // [count][n_l]
    const cplx* row(int j) const { return values.data() + static_cast<size_t>(j) * grid_l.n; }
    const cplx& at(int m, int j) const { return values[static_cast<size_t>(j) * grid_l.n + m]; }
};

SpectralPotential make_spectral_potential(const PotentialField& u, const Grid1D& grid_k, double cutoff);

// mu~#(k, l; y) for one sign. Storage [k][y][l]: values[(ik * ny + j) * nl + m].
struct MuSharpField {
    Sign sign = Sign::plus;
    Grid1D grid_k;
    Grid1D grid_l;
    YWindow yw;
    CVec values;
    double residual = 0.0;
    int iterations = 0;
    std::vector<double> ratio_history;  // max over k-slices of |r_n| / |r_{n-1}|
    std::vector<double> residual_history;

    size_t index(int ik, int j, int m) const {
        return (static_cast<size_t>(ik) * yw.count + j) * grid_l.n + m;
    }
    const cplx& at(int ik, int m, int j) const { return values[index(ik, j, m)]; }
};

// X = L^inf_y (L^2_k L^2_l)
double x_norm(const CVec& f, int nk, int ny, int nl, double dk, double dl);

// f and the result share the MuSharpField layout. (i/sqrt(2 pi)) int e^{-i l(l+2k)(y-eta)} (u~ * f) d eta.
CVec apply_g(Sign sign, const SpectralPotential& ut, const CVec& f);
// g(sqrt(2 pi) delta) = i int e^{-i l(l+2k)(y-eta)} u~(l; eta) d eta.
CVec g_on_delta(Sign sign, const SpectralPotential& ut);
MuSharpField solve_mu_sharp(Sign sign, const SpectralPotential& ut, double tol = 1e-10, int max_iter = 200);

// T arrays are [k][l] row-major over grid_k x grid_l.
struct TComponent {
    CVec T;        // masked, signed, diagonal halved
    CVec T1;       // unmasked delta part
    CVec bracket;  // unmasked nonlinear part before masking and sign
    long unresolved_pairs = 0;
};

TComponent assemble_T(Sign sign, const SpectralPotential& ut, const MuSharpField& mu);

struct ScatteringData {
    Grid1D grid_k;
    Grid1D grid_l;
    CVec T_plus;
    CVec T_minus;
    CVec T1;
    json meta;

    int n() const { return grid_k.n; }
    const cplx& tp(int i, int j) const { return T_plus[static_cast<size_t>(i) * grid_l.n + j]; }
    const cplx& tm(int i, int j) const { return T_minus[static_cast<size_t>(i) * grid_l.n + j]; }
    bool is_zero() const;
};

double l2_norm_kl(const CVec& T, const Grid1D& gk, const Grid1D& gl);

struct ScatteringRun {
    ConditionsReport conditions;
    SpectralPotential ut;
    MuSharpField mu_plus;
    MuSharpField mu_minus;
    ScatteringData data;
    CVec bracket_plus;
    CVec bracket_minus;
};

// Full direct map. Rejects potentials failing the small-data conditions.
ScatteringRun compute_scattering(const PotentialField& u, const ScatteringSettings& s = {});
ScatteringData scatter(const PotentialField& u, const ScatteringSettings& s = {});

struct LinearizedT {
    CVec values;  // -i u^(l-k, -(l^2-k^2)), unmasked
    long out_of_domain = 0;
};

// Band-limited interpolation of the 2D spectrum (exact in the p direction, Dirichlet kernel in q).
LinearizedT linearized_T(const PotentialField& u, const Grid1D& grid_k);

struct SplitReport {
    CVec T2_plus;
    CVec T2_minus;
    double norm_T2_plus = 0.0;
    double norm_T2_minus = 0.0;
    double ratio_plus = 0.0;
    double ratio_minus = 0.0;
};

// T2+ = T+ - H(l-k) T1, T2- = T- + H(k-l) T1 (T- carries the opposite sign).
SplitReport split_T(const ScatteringData& d);

struct MuKGrowth {
    std::vector<double> y;
    std::vector<double> ratio;  // ||d_k mu#(y)||_{L2 L2} / (1 + |y|)
    double sup = 0.0;
};

MuKGrowth diagnostic_mu_k_growth(const MuSharpField& mu);

void write_scattering(const std::string& dir, const ScatteringData& d);
ScatteringData read_scattering(const std::string& dir);

}  // namespace kpist
