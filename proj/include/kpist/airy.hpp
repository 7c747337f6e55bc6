#pragma once

#include <limits>

#include "kpist/grid.hpp"

namespace kpist {

// Ai(x): extended-precision Maclaurin series for |x| <= kAirySwitch, asymptotic expansions beyond.
constexpr double kAirySwitch = 8.0;
double airy(double x);
double airy_series(double x);
double airy_asymptotic(double x);

// (2 pi)^{-1/2} int e^{-i xi k} e^{-i t (12 a k + 4 k^3)} dk
//   = sqrt(2 pi) (12 t)^{-1/3} Ai((12 t)^{2/3} (a + xi/(12 t))).
double cubic_phase_transform(double a, double t, double xi);

struct HalfAiryResult {
    cplx value;
    double tail_bound = 0.0;  // size of the first neglected integration-by-parts term
    int panels = 0;
};

// int_{k_lower}^{inf} e^{-i xi l} e^{i t (12 a l + 4 l^3)} dl. k_lower may be -infinity.
HalfAiryResult half_airy(double t, double a, double xi, double k_lower, double tol = 1e-10);
cplx half_airy_H(double t, double a, double xi, double k_lower);

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

}  // namespace kpist
