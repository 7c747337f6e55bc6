#include "kpist/transform.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kpist/fft.hpp"

namespace kpist {

namespace {

constexpr double kPi = std::numbers::pi;

// Partial transform at spacing dual/pad over the full dual range, nP points.
PartialTransform padded_transform(const PotentialField& u, int pad) {
    const Grid1D& gx = u.grid_x;
    const int nx = gx.n, ny = u.grid_y.n, m = nx * pad;
    const double dx = gx.spacing();
    const Grid1D gl = Grid1D{gx.dual().min, gx.dual().max, m};
    PartialTransform out{gl, u.grid_y, CVec(static_cast<size_t>(m) * ny)};
    const double norm = dx / std::sqrt(2.0 * kPi);
    // l_m = (m - M/2) dl; e^{-i l_m x_i} = e^{-i l_m xmin} e^{-2 pi i m i / M} (-1)^i
    CVec pre(m);
    for (int k = 0; k < m; ++k) pre[k] = norm * std::polar(1.0, -gl.point(k) * gx.min);
    for (int j = 0; j < ny; ++j) {
        cplx* row = out.values.data() + static_cast<size_t>(j) * m;
        for (int i = 0; i < m; ++i) row[i] = 0.0;
        for (int i = 0; i < nx; ++i) row[i] = (i % 2 ? -1.0 : 1.0) * u.at(i, j);
        fft_forward(row, m);
        for (int k = 0; k < m; ++k) row[k] *= pre[k];
    }
    return out;
}

}  // namespace

double PartialTransform::max_abs() const {
    double mx = 0.0;
    for (const auto& v : values) mx = std::max(mx, std::abs(v));
    return mx;
}

PartialTransform partial_fourier_x(const PotentialField& u) {
    u.validate();
    return padded_transform(u, 1);
}

PartialTransform partial_fourier_x(const PotentialField& u, const Grid1D& grid_l) {
    u.validate();
    grid_l.validate();
    const Grid1D dual = u.grid_x.dual();
    if (grid_l.max > dual.max * (1 + 1e-12))
        throw std::invalid_argument("partial_fourier_x: l-grid exceeds the dual range");
    const double ratio = grid_l.spacing() / dual.spacing();
    int pad = 1, step = 1;
    if (ratio < 1.0) {
        pad = static_cast<int>(std::lround(1.0 / ratio));
        if (!is_power_of_two(pad) || std::abs(pad * ratio - 1.0) > 1e-9)
            throw std::invalid_argument("partial_fourier_x: spacing ratio must be a power of two");
    } else {
        step = static_cast<int>(std::lround(ratio));
        if (!is_power_of_two(step) || std::abs(ratio / step - 1.0) > 1e-9)
            throw std::invalid_argument("partial_fourier_x: spacing ratio must be a power of two");
    }
    const PartialTransform fine = padded_transform(u, pad);
    const int offset = nearest_index(fine.grid_l, grid_l.min);
    if (offset < 0) throw std::invalid_argument("partial_fourier_x: l-grid not aligned with the dual grid");
    PartialTransform out{grid_l, u.grid_y, CVec(static_cast<size_t>(grid_l.n) * u.grid_y.n)};
    for (int j = 0; j < u.grid_y.n; ++j)
        for (int m = 0; m < grid_l.n; ++m) out.at(m, j) = fine.at(offset + m * step, j);
    return out;
}

RVec inverse_partial_fourier_x(const PartialTransform& ut, const Grid1D& grid_x) {
    if (ut.grid_l != grid_x.dual()) throw std::invalid_argument("inverse_partial_fourier_x: not the dual grid");
    const int n = grid_x.n, ny = ut.grid_y.n;
    const double dl = ut.grid_l.spacing();
    RVec out(static_cast<size_t>(n) * ny);
    CVec row(n);
    for (int j = 0; j < ny; ++j) {
        for (int m = 0; m < n; ++m) row[m] = ut.at(m, j) * std::polar(1.0, ut.grid_l.point(m) * grid_x.min);
        fft_inverse(row);
        for (int i = 0; i < n; ++i)
            out[static_cast<size_t>(i) * ny + j] = ((i % 2) ? -1.0 : 1.0) * row[i].real() * dl / std::sqrt(2.0 * kPi);
    }
    return out;
}

FullTransform full_fourier(const PotentialField& u) {
    u.validate();
    const int nx = u.grid_x.n, ny = u.grid_y.n;
    FullTransform out{u.grid_x.dual(), u.grid_y.dual(), CVec(static_cast<size_t>(nx) * ny)};
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            out.values[static_cast<size_t>(i) * ny + j] = (((i + j) % 2) ? -1.0 : 1.0) * u.at(i, j);
    fft2_forward(out.values.data(), nx, ny);
    const double norm = u.grid_x.spacing() * u.grid_y.spacing() / (2.0 * kPi);
    for (int m = 0; m < nx; ++m) {
        const cplx ex = std::polar(norm, -out.grid_p.point(m) * u.grid_x.min);
        for (int k = 0; k < ny; ++k)
            out.values[static_cast<size_t>(m) * ny + k] *= ex * std::polar(1.0, -out.grid_q.point(k) * u.grid_y.min);
    }
    return out;
}

RVec inverse_full_fourier(const FullTransform& uh, const Grid1D& gx, const Grid1D& gy) {
    const int nx = gx.n, ny = gy.n;
    CVec a(uh.values);
    for (int m = 0; m < nx; ++m) {
        const cplx ex = std::polar(1.0, uh.grid_p.point(m) * gx.min);
        for (int k = 0; k < ny; ++k)
            a[static_cast<size_t>(m) * ny + k] *= ex * std::polar(1.0, uh.grid_q.point(k) * gy.min);
    }
    fft2_inverse(a.data(), nx, ny);
    const double norm = uh.grid_p.spacing() * uh.grid_q.spacing() / (2.0 * kPi);
    RVec out(a.size());
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            out[static_cast<size_t>(i) * ny + j] = (((i + j) % 2) ? -1.0 : 1.0) * a[static_cast<size_t>(i) * ny + j].real() * norm;
    return out;
}

double l2_norm(const PotentialField& u) {
    double s = 0.0;
    for (double v : u.values) s += v * v;
    return std::sqrt(s * u.grid_x.spacing() * u.grid_y.spacing());
}

double l2_norm(const PartialTransform& ut) {
    double s = 0.0;
    for (const auto& v : ut.values) s += std::norm(v);
    return std::sqrt(s * ut.grid_l.spacing() * ut.grid_y.spacing());
}

double l1_norm(const PartialTransform& ut) {
    double s = 0.0;
    for (const auto& v : ut.values) s += std::abs(v);
    return s * ut.grid_l.spacing() * ut.grid_y.spacing();
}

double weighted_w_norm(const PartialTransform& ut) {
    double s = 0.0;
    const double dl = ut.grid_l.spacing();
    for (int j = 0; j < ut.grid_y.n; ++j)
        for (int m = 0; m < ut.grid_l.n; ++m) {
            const double l = ut.grid_l.point(m);
            if (std::abs(l) < 0.5 * dl) continue;
            s += std::norm(ut.at(m, j)) / std::abs(l);
        }
    return std::sqrt(s * dl * ut.grid_y.spacing());
}

namespace {

// Component norms of the E_{1,w} norm, derivatives and the inverse x-derivative spectral.
double e1w_norm(const PotentialField& u) {
    const int nx = u.grid_x.n, ny = u.grid_y.n;
    const double dx = u.grid_x.spacing(), dy = u.grid_y.spacing();
    const FullTransform uh = full_fourier(u);
    auto weighted_l2 = [&](const RVec& f, auto wfun) {
        double s = 0.0;
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                const double w = wfun(u.grid_x.point(i), u.grid_y.point(j));
                s += std::pow(w * f[static_cast<size_t>(i) * ny + j], 2);
            }
        return std::sqrt(s * dx * dy);
    };
    auto spectral = [&](auto mult) {
        FullTransform g = uh;
        for (int m = 0; m < nx; ++m)
            for (int k = 0; k < ny; ++k)
                g.values[static_cast<size_t>(m) * ny + k] *= mult(g.grid_p.point(m), g.grid_q.point(k));
        return inverse_full_fourier(g, u.grid_x, u.grid_y);
    };
    const double dp = uh.grid_p.spacing();
    const double a = weighted_l2(u.values, [](double x, double y) { return std::pow(1 + x * x, 2) * std::pow(1 + y * y, 2.5); });
    const RVec dxx = spectral([](double p, double) { return cplx(std::pow(1 + p * p, 2)); });
    const double b = weighted_l2(dxx, [](double, double y) { return std::pow(1 + y * y, 2); });
    const RVec dyy = spectral([](double, double q) { return cplx(std::pow(1 + q * q, 2)); });
    const double c = weighted_l2(dyy, [](double, double) { return 1.0; });
    const RVec ix = spectral([dp](double p, double) { return std::abs(p) < 0.5 * dp ? cplx(0) : cplx(0, -1.0 / p); });
    const double d = weighted_l2(ix, [](double, double) { return 1.0; });
    const RVec ixy = spectral([dp](double p, double q) { return std::abs(p) < 0.5 * dp ? cplx(0) : cplx(q / p); });
    const double e = weighted_l2(ixy, [](double, double y) { return std::sqrt(1 + y * y); });
    return a + b + c + d + e;
}

}  // namespace

ConditionsReport check_conditions(const PotentialField& u) { return check_conditions(u, partial_fourier_x(u)); }

ConditionsReport check_conditions(const PotentialField& u, const PartialTransform& ut) {
    ConditionsReport r;
    const double s2pi = std::sqrt(2.0 * kPi);
    const double dl = ut.grid_l.spacing(), dy = ut.grid_y.spacing();
    double l1 = 0.0, l11 = 0.0;
    for (int j = 0; j < ut.grid_y.n; ++j)
        for (int m = 0; m < ut.grid_l.n; ++m) {
            const double l = ut.grid_l.point(m);
            const double a = std::abs(ut.at(m, j));
            l1 += a;
            l11 += std::sqrt(1 + l * l) * a;
        }
    r.c = l1 * dl * dy / s2pi;
    r.c_tilde = l11 * dl * dy / s2pi;
    r.w_norm = weighted_w_norm(ut);
    r.e1w_norm = e1w_norm(u);
    const int m0 = nearest_index(ut.grid_l, 0.0);
    const double mx = ut.max_abs();
    if (m0 >= 0)
        for (int j = 0; j < ut.grid_y.n; ++j)
            if (std::abs(ut.at(m0, j)) > 1e-8 * mx) r.l0_flag = true;
    std::ostringstream os;
    if (r.l0_flag) os << "u~(0,y) exceeds 1e-8 max|u~|: |l|^-1 quadrature diverges; ";
    if (!(r.c < 1)) os << "c >= 1; ";
    if (!(r.c_tilde < 1)) os << "c_tilde >= 1; ";
    if (!(r.w_norm < (1 - r.c) / 4)) os << "w_norm >= (1-c)/4; ";
    r.diagnostic = os.str();
    r.pass = !r.l0_flag && r.c < 1 && r.c_tilde < 1 && r.w_norm < (1 - r.c) / 4;
    return r;
}

}  // namespace kpist
