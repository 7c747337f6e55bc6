#include "kpist/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kpist/fft.hpp"

namespace kpist {

namespace {

const cplx kI(0.0, 1.0);

RVec fft_wavenumbers(const Grid1D& g) {
    RVec k(g.n);
    const double dk = 2.0 * std::numbers::pi / (g.n * g.spacing());
    for (int m = 0; m < g.n; ++m) k[m] = dk * (m < g.n / 2 ? m : m - g.n);
    return k;
}

bool kept(int m, int n) {
    const int a = m < n / 2 ? m : n - m;
    return 3 * a < n;
}

// -3 i p (u^2)^ on kept modes.
CVec nonlinear(const OracleState& s, const CVec& uh) {
    const int nx = s.grid_x.n, ny = s.grid_y.n;
    CVec v = uh;
    fft2_inverse(v.data(), nx, ny);
    const double inv = 1.0 / (static_cast<double>(nx) * ny);
    for (auto& z : v) {
        const double r = z.real() * inv;
        z = r * r;
    }
    fft2_forward(v.data(), nx, ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const size_t q = static_cast<size_t>(i) * ny + j;
            v[q] = s.dealias_mask[q] ? -3.0 * kI * s.p[i] * v[q] : cplx(0.0);
        }
    return v;
}

}  // namespace

double oracle_omega(double p, double q) { return p == 0.0 ? 0.0 : p * p * p + 3.0 * q * q / p; }

OracleState make_oracle_state(const PotentialField& u0) {
    u0.validate();
    OracleState s;
    s.grid_x = u0.grid_x;
    s.grid_y = u0.grid_y;
    const int nx = s.grid_x.n, ny = s.grid_y.n;
    s.p = fft_wavenumbers(s.grid_x);
    s.q = fft_wavenumbers(s.grid_y);
    s.dealias_mask.assign(static_cast<size_t>(nx) * ny, 0);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            s.dealias_mask[static_cast<size_t>(i) * ny + j] = (i != 0 && kept(i, nx) && kept(j, ny)) ? 1 : 0;
    s.u_hat.assign(u0.values.begin(), u0.values.end());
    fft2_forward(s.u_hat.data(), nx, ny);
    for (size_t q = 0; q < s.u_hat.size(); ++q)
        if (!s.dealias_mask[q]) s.u_hat[q] = 0.0;
    return s;
}

double oracle_max_omega(const OracleState& s) {
    const int nx = s.grid_x.n, ny = s.grid_y.n;
    double m = 0.0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            if (s.dealias_mask[static_cast<size_t>(i) * ny + j]) m = std::max(m, std::abs(oracle_omega(s.p[i], s.q[j])));
    return m;
}

double oracle_dt_bound(const OracleState& s) {
    const double m = oracle_max_omega(s);
    return m > 0 ? 0.5 / m : std::numeric_limits<double>::infinity();
}

void oracle_step(OracleState& s, double dt) {
    if (!(dt > 0)) throw std::invalid_argument("oracle_step: dt must be positive");
    const double bound = oracle_dt_bound(s);
    if (dt > bound * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "oracle_step: dt = " << dt << " exceeds the bound 0.5/max|omega| = " << bound;
        throw std::invalid_argument(os.str());
    }
    const int nx = s.grid_x.n, ny = s.grid_y.n;
    const size_t N = s.u_hat.size();
    CVec E(N);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const size_t q = static_cast<size_t>(i) * ny + j;
            E[q] = s.dealias_mask[q] ? std::polar(1.0, 0.5 * dt * oracle_omega(s.p[i], s.q[j])) : cplx(0.0);
        }
    const CVec& u = s.u_hat;
    const CVec k1 = nonlinear(s, u);
    CVec a(N);
    for (size_t q = 0; q < N; ++q) a[q] = E[q] * (u[q] + 0.5 * dt * k1[q]);
    const CVec k2 = nonlinear(s, a);
    for (size_t q = 0; q < N; ++q) a[q] = E[q] * u[q] + 0.5 * dt * k2[q];
    const CVec k3 = nonlinear(s, a);
    for (size_t q = 0; q < N; ++q) a[q] = E[q] * E[q] * u[q] + dt * E[q] * k3[q];
    const CVec k4 = nonlinear(s, a);
    double mx = 0.0;
    bool finite = true;
    for (size_t q = 0; q < N; ++q) {
        const cplx e2 = E[q] * E[q];
        a[q] = e2 * u[q] + dt / 6.0 * (e2 * k1[q] + 2.0 * E[q] * (k2[q] + k3[q]) + k4[q]);
        if (!std::isfinite(a[q].real()) || !std::isfinite(a[q].imag())) finite = false;
        else mx = std::max(mx, std::abs(a[q]));
    }
    if (!finite || mx > 1e150) {
        std::ostringstream os;
        os << "oracle_step: non-finite spectrum at t = " << s.t << " (max |u_hat| = " << mx << ")";
        throw std::runtime_error(os.str());
    }
    s.u_hat = std::move(a);
    s.t += dt;
    s.dt = dt;
}

RVec oracle_field(const OracleState& s) {
    CVec v = s.u_hat;
    fft2_inverse(v.data(), s.grid_x.n, s.grid_y.n);
    const double inv = 1.0 / (static_cast<double>(s.grid_x.n) * s.grid_y.n);
    RVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].real() * inv;
    return out;
}

double oracle_l2(const OracleState& s) {
    double acc = 0.0;
    for (const auto& z : s.u_hat) acc += std::norm(z);
    return std::sqrt(acc * s.grid_x.spacing() * s.grid_y.spacing() / (static_cast<double>(s.grid_x.n) * s.grid_y.n));
}

EvolveResult evolve(const PotentialField& u0, double t_final, double dt, double drift_tol) {
    if (t_final < 0) throw std::invalid_argument("evolve: t_final must be nonnegative");
    OracleState s = make_oracle_state(u0);
    if (dt <= 0) dt = oracle_dt_bound(s);
    EvolveResult r;
    const int steps = t_final == 0.0 ? 0 : static_cast<int>(std::ceil(t_final / dt - 1e-9));
    const double h = steps > 0 ? t_final / steps : 0.0;
    const double l0 = oracle_l2(s);
    r.times.push_back(0.0);
    r.l2.push_back(l0);
    for (int i = 0; i < steps; ++i) {
        oracle_step(s, h);
        const double l = oracle_l2(s);
        r.times.push_back(s.t);
        r.l2.push_back(l);
        if (l0 > 0) r.drift = std::max(r.drift, std::abs(l / l0 - 1.0));
    }
    r.steps = steps;
    if (r.drift > drift_tol) {
        std::ostringstream os;
        os << "evolve: L2 drift " << r.drift << " exceeds " << drift_tol;
        throw std::runtime_error(os.str());
    }
    r.field = u0;
    r.field.values = steps > 0 ? oracle_field(s) : u0.values;
    return r;
}

}  // namespace kpist
