#pragma once

#include <array>

#include "kpist/grid.hpp"

namespace kpist {

constexpr int kGaussPoints = 10;

struct GaussRule {
    std::array<double, kGaussPoints> x{};  // nodes on [-1, 1]
    std::array<double, kGaussPoints> w{};
    // S[q][r]: integral from -1 to x_q of the r-th Lagrange basis polynomial.
    std::array<std::array<double, kGaussPoints>, kGaussPoints> S{};
};

const GaussRule& gauss_rule();

// A(theta) = int_0^1 e^{i theta u} du, B(theta) = int_0^1 u e^{i theta u} du (series near 0).
cplx filon_A(double theta);
cplx filon_B(double theta);

// Weights W_j = int hat_j(y) e^{i omega y} dy for the hat basis on grid y_0..y_{N-1}
// (half hats at the two ends).
CVec hat_weights(const Grid1D& g, int first, int count, double omega);

// Cumulative Volterra integrals I(y_j) = int_{-inf}^{y_j} e^{-i omega (y_j - eta)} h(eta) d eta
// (forward) or -int_{y_j}^{+inf} ... (backward), h piecewise linear, zero outside the samples.
// Strided access: h[j * hs], out[j * os].
void cumulative_forward(const cplx* h, int hs, cplx* out, int os, int n, double omega, double dy);
void cumulative_backward(const cplx* h, int hs, cplx* out, int os, int n, double omega, double dy);

}  // namespace kpist
