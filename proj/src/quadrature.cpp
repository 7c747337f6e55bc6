#include "kpist/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace kpist {

namespace {

void legendre(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

double legendre_value(int n, double x) {
    if (n < 0) return 0.0;
    if (n == 0) return 1.0;
    if (n == 1) return x;
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

GaussRule build_rule() {
    GaussRule g;
    constexpr int n = kGaussPoints;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p, dp;
            legendre(n, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p, dp;
        legendre(n, x, p, dp);
        g.x[n - 1 - i] = x;
        g.w[n - 1 - i] = 2.0 / ((1 - x * x) * dp * dp);
    }
    for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                const double ip = k == 0 ? g.x[q] + 1.0
                                         : (legendre_value(k + 1, g.x[q]) - legendre_value(k - 1, g.x[q])) / (2 * k + 1);
                s += 0.5 * (2 * k + 1) * legendre_value(k, g.x[r]) * ip;
            }
            g.S[q][r] = g.w[r] * s;
        }
    return g;
}

}  // namespace

const GaussRule& gauss_rule() {
    static const GaussRule g = build_rule();
    return g;
}

cplx filon_A(double t) {
    if (std::abs(t) < 0.5) {
        cplx s = 0.0, term = 1.0;  // (i t)^n / (n+1)!
        for (int n = 0; n < 24; ++n) {
            s += term;
            term *= cplx(0, t) / double(n + 2);
        }
        return s;
    }
    return (std::polar(1.0, t) - 1.0) / cplx(0, t);
}

cplx filon_B(double t) {
    if (std::abs(t) < 0.5) {
        cplx s = 0.0, pw = 1.0;  // (i t)^n / n!
        for (int n = 0; n < 24; ++n) {
            s += pw / double(n + 2);
            pw *= cplx(0, t) / double(n + 1);
        }
        return s;
    }
    const cplx e = std::polar(1.0, t);
    return e / cplx(0, t) + (e - 1.0) / (t * t);
}

CVec hat_weights(const Grid1D& g, int first, int count, double omega) {
    const double h = g.spacing();
    const double th = omega * h;
    const double half = 0.5 * th;
    const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
    const cplx right = h * (filon_A(th) - filon_B(th));  // int_0^1 (1-u) e^{i th u} du * h
    CVec w(count);
    for (int k = 0; k < count; ++k) {
        const double y = g.point(first + k);
        const cplx e = std::polar(1.0, omega * y);
        if (count == 1)
            w[k] = 0.0;
        else if (k == 0)
            w[k] = e * right;
        else if (k == count - 1)
            w[k] = e * std::conj(right);
        else
            w[k] = e * (h * sinc * sinc);
    }
    return w;
}

void cumulative_forward(const cplx* h, int hs, cplx* out, int os, int n, double omega, double dy) {
    const double th = omega * dy;
    const cplx A = filon_A(th), B = filon_B(th);
    const cplx decay = std::polar(1.0, -th);
    const cplx cj = dy * std::conj(A - B);  // weight on h_j
    const cplx cp = dy * std::conj(B);      // weight on h_{j-1}
    cplx acc = 0.0;
    out[0] = 0.0;
    for (int j = 1; j < n; ++j) {
        acc = decay * acc + cj * h[j * hs] + cp * h[(j - 1) * hs];
        out[j * os] = acc;
    }
}

void cumulative_backward(const cplx* h, int hs, cplx* out, int os, int n, double omega, double dy) {
    const double th = omega * dy;
    const cplx A = filon_A(th), B = filon_B(th);
    const cplx grow = std::polar(1.0, th);
    const cplx cj = dy * (A - B);  // weight on h_j
    const cplx cn = dy * B;        // weight on h_{j+1}
    cplx acc = 0.0;
    out[(n - 1) * os] = 0.0;
    for (int j = n - 2; j >= 0; --j) {
        acc = grow * acc - (cj * h[j * hs] + cn * h[(j + 1) * hs]);
        out[j * os] = acc;
    }
}

}  // namespace kpist
