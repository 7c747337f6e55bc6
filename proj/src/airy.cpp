#include "kpist/airy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kpist/quadrature.hpp"

namespace kpist {

namespace {

constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
constexpr long double kAip0 = 0.258819403792806798405183560189203963L;  // -Ai'(0)
constexpr double kPi = std::numbers::pi;

}  // namespace

double airy_series(double xd) {
    const long double x = xd, x3 = x * x * x;
    long double f = 0, g = 0, tf = 1, tg = x;
    for (int k = 1; k < 400; ++k) {
        f += tf;
        g += tg;
        tf *= x3 / ((3.0L * k - 1) * (3.0L * k));
        tg *= x3 / ((3.0L * k) * (3.0L * k + 1));
        if (std::fabs(tf) + std::fabs(tg) < 1e-22L * (std::fabs(f) + std::fabs(g) + 1e-300L)) break;
    }
    return static_cast<double>(kAi0 * f - kAip0 * g);
}

double airy_asymptotic(double x) {
    const double z = std::abs(x);
    const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
    // u_k = (6k-5)(6k-3)(6k-1) / (216 k (2k-1)) u_{k-1}; truncate at the smallest term.
    double u[64];
    u[0] = 1.0;
    for (int k = 1; k < 64; ++k) u[k] = u[k - 1] * (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / (216.0 * k * (2.0 * k - 1));
    if (x > 0) {
        double s = 0, p = 1, last = 1e300;
        for (int k = 0; k < 64; ++k) {
            const double term = u[k] * p;
            if (std::abs(term) > last) break;
            s += (k % 2 ? -term : term);
            last = std::abs(term);
            p /= zeta;
        }
        return std::exp(-zeta) / (2.0 * std::sqrt(kPi) * std::pow(z, 0.25)) * s;
    }
    double se = 0, so = 0, p = 1, last = 1e300;
    for (int k = 0; k < 64; ++k) {
        const double term = u[k] * p;
        if (std::abs(term) > last) break;
        last = std::abs(term);
        const int sign = ((k / 2) % 2) ? -1 : 1;
        if (k % 2 == 0)
            se += sign * term;
        else
            so += sign * term;
        p /= zeta;
    }
    const double ph = zeta - 0.25 * kPi;
    return (std::cos(ph) * se + std::sin(ph) * so) / (std::sqrt(kPi) * std::pow(z, 0.25));
}

double airy(double x) { return std::abs(x) <= kAirySwitch ? airy_series(x) : airy_asymptotic(x); }

double cubic_phase_transform(double a, double t, double xi) {
    if (!(t > 0)) throw std::invalid_argument("cubic_phase_transform: t must be positive");
    const double s = 12.0 * t;
    return std::sqrt(2.0 * kPi) * std::cbrt(1.0 / s) * airy(std::pow(s, 2.0 / 3.0) * (a + xi / s));
}

namespace {

struct CubicPhase {
    double t, a, xi;
    double operator()(double l) const { return -xi * l + t * (12.0 * a * l + 4.0 * l * l * l); }
    double d1(double l) const { return -xi + 12.0 * t * (a + l * l); }
    double d2(double l) const { return 24.0 * t * l; }
    double max_abs_d1(double lo, double hi) const {
        double m = std::max(std::abs(d1(lo)), std::abs(d1(hi)));
        if (lo < 0 && hi > 0) m = std::max(m, std::abs(d1(0.0)));
        return m;
    }
};

// Two integration-by-parts terms of int_L^inf (upper) or int_-inf^L (lower).
cplx ibp_tail(const CubicPhase& ph, double L, bool upper, double& bound) {
    const double p1 = ph.d1(L), p2 = ph.d2(L), p3 = 24.0 * ph.t;
    const cplx e = std::polar(1.0, ph(L));
    bound = 3.0 * p2 * p2 / std::pow(std::abs(p1), 5) + std::abs(p3) / std::pow(p1, 4);
    const cplx v = e * (cplx(0, 1.0 / p1) + p2 / (p1 * p1 * p1));
    return upper ? v : -v;
}

cplx panel_integral(const CubicPhase& ph, double lo, double hi, int& panels) {
    const GaussRule& g = gauss_rule();
    cplx total = 0.0;
    double a = lo;
    while (a < hi) {
        double h = std::min(0.5, hi - a);
        while (h * ph.max_abs_d1(a, a + h) > 3.0) h *= 0.5;
        const double c = a + 0.5 * h, r = 0.5 * h;
        cplx s = 0.0;
        for (int q = 0; q < kGaussPoints; ++q) s += g.w[q] * std::polar(1.0, ph(c + r * g.x[q]));
        total += r * s;
        ++panels;
        a += h;
    }
    return total;
}

}  // namespace

HalfAiryResult half_airy(double t, double a, double xi, double k_lower, double tol) {
    if (!(t > 0)) throw std::invalid_argument("half_airy: t must be positive");
    const CubicPhase ph{t, a, xi};
    const double s2 = xi / (12.0 * t) - a;
    const double r = s2 > 0 ? std::sqrt(s2) : 0.0;
    HalfAiryResult res;
    auto pick_end = [&](double start) {
        double L = start;
        for (int it = 0; it < 4000; ++it) {
            double b;
            ibp_tail(ph, L, true, b);
            if (b < 0.01 * tol && std::abs(ph.d1(L)) > 0) return L;
            L += 0.25;
        }
        throw std::runtime_error("half_airy: tail bound unreachable, achieved bound above " + std::to_string(tol));
    };
    const double L1 = pick_end(std::max(std::isfinite(k_lower) ? k_lower : 0.0, r) + 0.5);
    double b1 = 0.0, b0 = 0.0;
    cplx v = ibp_tail(ph, L1, true, b1);
    double L0 = k_lower;
    if (!std::isfinite(k_lower)) {
        L0 = -L1;
        v += ibp_tail(ph, L0, false, b0);
    }
    if (L0 < L1) v += panel_integral(ph, L0, L1, res.panels);
    res.value = v;
    res.tail_bound = b0 + b1;
    if (res.tail_bound > tol)
        throw std::runtime_error("half_airy: tail bound " + std::to_string(res.tail_bound) + " above tolerance");
    return res;
}

cplx half_airy_H(double t, double a, double xi, double k_lower) { return half_airy(t, a, xi, k_lower).value; }

}  // namespace kpist
