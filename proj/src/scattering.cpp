#include "kpist/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kpist/fft.hpp"
#include "kpist/parallel.hpp"
#include "kpist/quadrature.hpp"

namespace kpist {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

// Linear l-convolution with u~ row by row, through zero-padded FFTs of length 2n.
// out[j][s] = D * sum_m' u~(l_s - l_m') f(l_m'), with l_s = (s - n) D for s in [0, 2n).
class Convolver {
public:
    explicit Convolver(const SpectralPotential& ut) : n_(ut.grid_l.n), ny_(ut.yw.count), d_(ut.grid_l.spacing()) {
        uhat_.assign(static_cast<size_t>(ny_) * 2 * n_, 0.0);
        for (int j = 0; j < ny_; ++j) {
            cplx* r = uhat_.data() + static_cast<size_t>(j) * 2 * n_;
            for (int m = 0; m < n_; ++m) r[m] = ut.at(m, j);
        }
        fft_forward_rows(uhat_.data(), 2 * n_, ny_);
    }

    // f: [ny][n] slice; buf: [ny][2n] output.
    void apply(const cplx* f, CVec& buf) const {
        buf.assign(static_cast<size_t>(ny_) * 2 * n_, 0.0);
        for (int j = 0; j < ny_; ++j)
            std::copy(f + static_cast<size_t>(j) * n_, f + static_cast<size_t>(j + 1) * n_,
                      buf.begin() + static_cast<size_t>(j) * 2 * n_);
        fft_forward_rows(buf.data(), 2 * n_, ny_);
        for (size_t i = 0; i < buf.size(); ++i) buf[i] *= uhat_[i];
        fft_inverse_rows(buf.data(), 2 * n_, ny_);
        const double s = d_ / (2.0 * n_);
        for (auto& v : buf) v *= s;
    }

private:
    int n_, ny_;
    double d_;
    CVec uhat_;
};

// Cumulative y-integral of the source column with the direction rule of the sign.
// src column has stride hs; result written with stride n into out.
void directed_cumulative(Sign sign, double l, double omega, const cplx* src, int hs, cplx* out, int os, int ny,
                         double dy, CVec& tmp) {
    const bool from_plus = (sgn(sign) * l) > 0;
    if (l == 0.0) {
        tmp.resize(ny);
        cumulative_forward(src, hs, out, os, ny, omega, dy);
        cumulative_backward(src, hs, tmp.data(), 1, ny, omega, dy);
        for (int j = 0; j < ny; ++j) out[j * os] = 0.5 * (out[j * os] + tmp[j]);
    } else if (from_plus) {
        cumulative_backward(src, hs, out, os, ny, omega, dy);
    } else {
        cumulative_forward(src, hs, out, os, ny, omega, dy);
    }
}

// One application of g to a k-slice f ([ny][n]); result in out ([ny][n]).
void apply_g_slice(Sign sign, const SpectralPotential& ut, const Convolver& conv, double k, const cplx* f,
                   cplx* out, CVec& buf, CVec& tmp) {
    const int n = ut.grid_l.n, ny = ut.yw.count;
    conv.apply(f, buf);
    const cplx pre(0.0, 1.0 / kSqrt2Pi);
    for (int m = 0; m < n; ++m) {
        const double l = ut.grid_l.point(m);
        directed_cumulative(sign, l, l * (l + 2.0 * k), buf.data() + m + n / 2, 2 * n, out + m, n, ny, ut.yw.dy, tmp);
    }
    for (size_t i = 0; i < static_cast<size_t>(ny) * n; ++i) out[i] *= pre;
}

void g_on_delta_slice(Sign sign, const SpectralPotential& ut, double k, cplx* out, CVec& tmp) {
    const int n = ut.grid_l.n, ny = ut.yw.count;
    for (int m = 0; m < n; ++m) {
        const double l = ut.grid_l.point(m);
        directed_cumulative(sign, l, l * (l + 2.0 * k), ut.values.data() + m, n, out + m, n, ny, ut.yw.dy, tmp);
    }
    for (size_t i = 0; i < static_cast<size_t>(ny) * n; ++i) out[i] *= cplx(0.0, 1.0);
}

void check_layout(const SpectralPotential& ut, const CVec& f) {
    const size_t expect = static_cast<size_t>(ut.grid_l.n) * ut.grid_l.n * ut.yw.count;
    if (f.size() != expect) throw std::invalid_argument("apply_g: array does not match the (k, l, y) grid");
}

}  // namespace

std::string to_string(Sign s) { return s == Sign::plus ? "plus" : "minus"; }

YWindow y_window(const PartialTransform& ut, double cutoff) {
    const double mx = ut.max_abs();
    int lo = ut.grid_y.n, hi = -1;
    for (int j = 0; j < ut.grid_y.n; ++j) {
        double r = 0.0;
        for (int m = 0; m < ut.grid_l.n; ++m) r = std::max(r, std::abs(ut.at(m, j)));
        if (mx > 0 && r >= cutoff * mx) {
            lo = std::min(lo, j);
            hi = std::max(hi, j);
        }
    }
    YWindow w;
    w.dy = ut.grid_y.spacing();
    if (hi < 0) {
        // Zero data: keep a minimal symmetric window around y = 0.
        const int c = ut.grid_y.n / 2;
        lo = c - 1;
        hi = c + 1;
    }
    w.first = lo;
    w.count = hi - lo + 1;
    w.y0 = ut.grid_y.point(lo);
    return w;
}

Grid1D spectral_grid(const PotentialField& u, int n_k) {
    const Grid1D dual = u.grid_x.dual();
    Grid1D g{dual.min, dual.max, n_k > 0 ? n_k : u.grid_x.n};
    g.validate();
    return g;
}

SpectralPotential make_spectral_potential(const PotentialField& u, const Grid1D& grid_k, double cutoff) {
    const PartialTransform pt = partial_fourier_x(u, grid_k);
    SpectralPotential sp;
    sp.grid_l = grid_k;
    sp.yw = y_window(pt, cutoff);
    sp.values.resize(static_cast<size_t>(sp.yw.count) * grid_k.n);
    for (int j = 0; j < sp.yw.count; ++j)
        for (int m = 0; m < grid_k.n; ++m) sp.values[static_cast<size_t>(j) * grid_k.n + m] = pt.at(m, sp.yw.first + j);
    return sp;
}

double x_norm(const CVec& f, int nk, int ny, int nl, double dk, double dl) {
    double sup = 0.0;
    for (int j = 0; j < ny; ++j) {
        double s = 0.0;
        for (int ik = 0; ik < nk; ++ik) {
            const cplx* r = f.data() + (static_cast<size_t>(ik) * ny + j) * nl;
            for (int m = 0; m < nl; ++m) s += std::norm(r[m]);
        }
        sup = std::max(sup, s);
    }
    return std::sqrt(sup * dk * dl);
}

CVec apply_g(Sign sign, const SpectralPotential& ut, const CVec& f) {
    check_layout(ut, f);
    const int n = ut.grid_l.n, ny = ut.yw.count;
    for (const auto& v : f)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::invalid_argument("apply_g: non-finite input");
    const Convolver conv(ut);
    CVec out(f.size());
    const size_t slice = static_cast<size_t>(ny) * n;
    parallel_for(n, [&](int ik) {
        CVec buf, tmp;
        apply_g_slice(sign, ut, conv, ut.grid_l.point(ik), f.data() + ik * slice, out.data() + ik * slice, buf, tmp);
    });
    return out;
}

CVec g_on_delta(Sign sign, const SpectralPotential& ut) {
    const int n = ut.grid_l.n, ny = ut.yw.count;
    const size_t slice = static_cast<size_t>(ny) * n;
    CVec out(slice * n);
    parallel_for(n, [&](int ik) {
        CVec tmp;
        g_on_delta_slice(sign, ut, ut.grid_l.point(ik), out.data() + ik * slice, tmp);
    });
    return out;
}

MuSharpField solve_mu_sharp(Sign sign, const SpectralPotential& ut, double tol, int max_iter) {
    const int n = ut.grid_l.n, ny = ut.yw.count;
    const double d = ut.grid_l.spacing();
    const size_t slice = static_cast<size_t>(ny) * n;
    const double slice_tol = tol / std::sqrt(n * d);
    MuSharpField mu;
    mu.sign = sign;
    mu.grid_k = ut.grid_l;
    mu.grid_l = ut.grid_l;
    mu.yw = ut.yw;
    mu.values.assign(slice * n, 0.0);
    const Convolver conv(ut);

    std::vector<std::vector<double>> ratios(n), resid_hist(n);
    std::vector<double> final_r2(static_cast<size_t>(n) * ny, 0.0);
    std::vector<int> iters(n, 0);
    std::vector<std::string> failure(n);

    parallel_for(n, [&](int ik) {
        const double k = ut.grid_l.point(ik);
        CVec buf, tmp, src(slice), next(slice);
        g_on_delta_slice(sign, ut, k, src.data(), tmp);
        cplx* f = mu.values.data() + ik * slice;
        std::copy(src.begin(), src.end(), f);
        double prev = -1.0;
        for (int it = 1; it <= max_iter; ++it) {
            apply_g_slice(sign, ut, conv, k, f, next.data(), buf, tmp);
            double sup_r = 0.0, sup_f = 0.0;
            for (int j = 0; j < ny; ++j) {
                double r2 = 0.0, f2 = 0.0;
                for (int m = 0; m < n; ++m) {
                    const size_t q = static_cast<size_t>(j) * n + m;
                    next[q] += src[q];
                    r2 += std::norm(next[q] - f[q]);
                    f2 += std::norm(f[q]);
                }
                final_r2[static_cast<size_t>(ik) * ny + j] = r2 * d;
                sup_r = std::max(sup_r, r2 * d);
                sup_f = std::max(sup_f, f2 * d);
            }
            sup_r = std::sqrt(sup_r);
            resid_hist[ik].push_back(sup_r);
            if (prev > 1e-13 * std::max(1.0, std::sqrt(sup_f))) ratios[ik].push_back(sup_r / prev);
            prev = sup_r;
            iters[ik] = it;
            if (sup_r <= slice_tol) return;
            std::copy(next.begin(), next.end(), f);
        }
        std::ostringstream os;
        os << "solve_mu_sharp: no convergence at k=" << k << " after " << max_iter << " iterations; residuals:";
        for (double r : resid_hist[ik]) os << ' ' << r;
        failure[ik] = os.str();
    });
    for (const auto& f : failure)
        if (!f.empty()) throw std::runtime_error(f);

    double sup = 0.0;
    for (int j = 0; j < ny; ++j) {
        double s = 0.0;
        for (int ik = 0; ik < n; ++ik) s += final_r2[static_cast<size_t>(ik) * ny + j];
        sup = std::max(sup, s);
    }
    const double xn = x_norm(mu.values, n, ny, n, d, d);
    mu.residual = std::sqrt(sup * d) / std::max(1.0, xn);
    mu.iterations = *std::max_element(iters.begin(), iters.end());
    for (int it = 0;; ++it) {
        double r = -1.0, h = 0.0;
        bool any = false;
        for (int ik = 0; ik < n; ++ik) {
            if (it < static_cast<int>(ratios[ik].size())) r = std::max(r, ratios[ik][it]), any = true;
            if (it < static_cast<int>(resid_hist[ik].size())) h = std::max(h, resid_hist[ik][it]), any = true;
        }
        if (!any) break;
        if (r >= 0) mu.ratio_history.push_back(r);
        mu.residual_history.push_back(h);
    }
    return mu;
}

TComponent assemble_T(Sign sign, const SpectralPotential& ut, const MuSharpField& mu) {
    const int n = ut.grid_l.n, ny = ut.yw.count;
    const double d = ut.grid_l.spacing(), dy = ut.yw.dy;
    if (mu.grid_k != ut.grid_l || mu.yw.count != ny) throw std::invalid_argument("assemble_T: grid mismatch");
    const size_t slice = static_cast<size_t>(ny) * n;
    TComponent out;
    out.T.assign(static_cast<size_t>(n) * n, 0.0);
    out.T1.assign(static_cast<size_t>(n) * n, 0.0);
    out.bracket.assign(static_cast<size_t>(n) * n, 0.0);
    const Convolver conv(ut);
    const double qmax = kPi / dy;
    const cplx pre(0.0, -1.0 / (2.0 * kPi));
    const cplx pre1(0.0, -1.0 / kSqrt2Pi);
    parallel_for(n, [&](int ik) {
        const double k = ut.grid_l.point(ik);
        CVec buf;
        conv.apply(mu.values.data() + ik * slice, buf);
        for (int il = 0; il < n; ++il) {
            const int jd = il - ik;
            const double l = jd * d;
            const double omega = l * (l + 2.0 * k);
            // Nonlinear part: Filon hat weights in y.
            const int s = jd + n;
            const double th = omega * dy, half = 0.5 * th;
            const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
            const cplx endw = dy * (filon_A(th) - filon_B(th));
            cplx acc = 0.0;
            for (int j = 0; j < ny; ++j) {
                const cplx e = std::polar(1.0, omega * ut.yw.point(j));
                cplx w;
                if (j == 0)
                    w = e * endw;
                else if (j == ny - 1)
                    w = e * std::conj(endw);
                else
                    w = e * (dy * sinc * sinc);
                acc += w * buf[static_cast<size_t>(j) * 2 * n + s];
            }
            const cplx br = pre * acc;
            // Delta part: trapezoid (exact trig sum of the sampled data) inside the resolvable band.
            cplx t1 = 0.0;
            const int m = jd + n / 2;
            if (m >= 0 && m < n && std::abs(omega) < qmax) {
                cplx a1 = 0.0;
                for (int j = 0; j < ny; ++j) a1 += std::polar(1.0, omega * ut.yw.point(j)) * ut.at(m, j);
                t1 = pre1 * a1 * dy;
            }
            const size_t q = static_cast<size_t>(ik) * n + il;
            out.T1[q] = t1;
            out.bracket[q] = br;
            const int side = sgn(sign) * jd;
            const double mask = side > 0 ? 1.0 : (side == 0 ? 0.5 : 0.0);
            if (mask > 0.0) out.T[q] = double(sgn(sign)) * mask * (t1 + br);
        }
    });
    double mx = 0.0;
    for (const auto& v : out.T) mx = std::max(mx, std::abs(v));
    for (int ik = 0; ik < n; ++ik)
        for (int il = 0; il < n; ++il) {
            const double l = (il - ik) * d, k = ut.grid_l.point(ik);
            if (std::abs(l * (l + 2 * k)) * dy > kPi / 4 && std::abs(out.T[static_cast<size_t>(ik) * n + il]) > 1e-6 * mx)
                ++out.unresolved_pairs;
        }
    return out;
}

bool ScatteringData::is_zero() const {
    for (const auto& v : T_plus)
        if (v != cplx(0.0)) return false;
    for (const auto& v : T_minus)
        if (v != cplx(0.0)) return false;
    return true;
}

double l2_norm_kl(const CVec& T, const Grid1D& gk, const Grid1D& gl) {
    double s = 0.0;
    for (const auto& v : T) s += std::norm(v);
    return std::sqrt(s * gk.spacing() * gl.spacing());
}

ScatteringRun compute_scattering(const PotentialField& u, const ScatteringSettings& s) {
    ScatteringRun run;
    run.conditions = check_conditions(u);
    if (!run.conditions.pass)
        throw std::invalid_argument("scatter: small-data conditions fail: " + run.conditions.diagnostic);
    const Grid1D gk = spectral_grid(u, s.n_k);
    run.ut = make_spectral_potential(u, gk, s.y_cutoff);
    run.mu_plus = solve_mu_sharp(Sign::plus, run.ut, s.tol, s.max_iter);
    run.mu_minus = solve_mu_sharp(Sign::minus, run.ut, s.tol, s.max_iter);
    TComponent tp = assemble_T(Sign::plus, run.ut, run.mu_plus);
    TComponent tm = assemble_T(Sign::minus, run.ut, run.mu_minus);
    ScatteringData& d = run.data;
    d.grid_k = gk;
    d.grid_l = gk;
    d.T_plus = std::move(tp.T);
    d.T_minus = std::move(tm.T);
    d.T1 = std::move(tp.T1);
    run.bracket_plus = std::move(tp.bracket);
    run.bracket_minus = std::move(tm.bracket);

    double mx = 0.0, mb = 0.0;
    const int n = gk.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = std::abs(d.tp(i, j)) + std::abs(d.tm(i, j));
            mx = std::max(mx, v);
            if (i == 0 || j == 0 || i == n - 1 || j == n - 1) mb = std::max(mb, v);
        }
    d.meta = json{{"format", "kpist-scattering-v1"},
                  {"potential",
                   {{"kind", u.kind},
                    {"amplitude", u.amplitude},
                    {"width", u.width},
                    {"k0", u.k0},
                    {"grid_x", grid_to_json(u.grid_x)},
                    {"grid_y", grid_to_json(u.grid_y)}}},
                  {"settings", {{"n_k", gk.n}, {"tol", s.tol}, {"max_iter", s.max_iter}, {"y_cutoff", s.y_cutoff}}},
                  {"conditions",
                   {{"c", run.conditions.c},
                    {"c_tilde", run.conditions.c_tilde},
                    {"w_norm", run.conditions.w_norm},
                    {"e1w_norm", run.conditions.e1w_norm},
                    {"pass", run.conditions.pass}}},
                  {"y_window", {{"y_min", run.ut.yw.y0}, {"y_max", run.ut.yw.point(run.ut.yw.count - 1)}, {"count", run.ut.yw.count}}},
                  {"mu_plus", {{"iterations", run.mu_plus.iterations}, {"residual", run.mu_plus.residual}}},
                  {"mu_minus", {{"iterations", run.mu_minus.iterations}, {"residual", run.mu_minus.residual}}},
                  {"unresolved_pairs", tp.unresolved_pairs + tm.unresolved_pairs},
                  {"boundary_ratio", mx > 0 ? mb / mx : 0.0},
                  {"boundary_ok", mx > 0 ? mb <= 1e-6 * mx : true}};
    return run;
}

ScatteringData scatter(const PotentialField& u, const ScatteringSettings& s) { return compute_scattering(u, s).data; }

LinearizedT linearized_T(const PotentialField& u, const Grid1D& gk) {
    const FullTransform uh = full_fourier(u);
    const int n = gk.n, nq = uh.grid_q.n;
    const double dy = u.grid_y.spacing(), ymin = u.grid_y.min, dq = uh.grid_q.spacing();
    LinearizedT out;
    out.values.assign(static_cast<size_t>(n) * n, 0.0);
    // g(q_n) = e^{i q_n ymin} u^(p, q_n), a trig polynomial in q with frequencies j dy, j in [0, nq).
    CVec g(static_cast<size_t>(uh.grid_p.n) * nq);
    for (int mp = 0; mp < uh.grid_p.n; ++mp)
        for (int iq = 0; iq < nq; ++iq)
            g[static_cast<size_t>(mp) * nq + iq] = uh.at(mp, iq) * std::polar(1.0, uh.grid_q.point(iq) * ymin);
    long ood = 0;
    for (int ik = 0; ik < n; ++ik)
        for (int il = 0; il < n; ++il) {
            const double k = gk.point(ik), l = gk.point(il);
            const double p = l - k, q = -(l - k) * (l + k);
            const double sp = (p - uh.grid_p.min) / uh.grid_p.spacing();
            const long mp = std::lround(sp);
            if (mp < 0 || mp >= uh.grid_p.n || q < uh.grid_q.min || q >= uh.grid_q.max) {
                ++ood;
                continue;
            }
            if (std::abs(sp - mp) > 1e-6) throw std::invalid_argument("linearized_T: l-k not on the p grid");
            const cplx* gr = g.data() + static_cast<size_t>(mp) * nq;
            cplx acc = 0.0;
            for (int iq = 0; iq < nq; ++iq) {
                const double s = q - uh.grid_q.point(iq);
                const double h = 0.5 * s * dy;
                cplx kern;
                if (std::abs(s) < 1e-12 * dq)
                    kern = 1.0;
                else
                    kern = std::polar(std::sin(nq * h) / (nq * std::sin(h)), -s * (nq - 1) * dy * 0.5);
                acc += gr[iq] * kern;
            }
            out.values[static_cast<size_t>(ik) * n + il] = cplx(0.0, -1.0) * acc * std::polar(1.0, -q * ymin);
        }
    out.out_of_domain = ood;
    return out;
}

SplitReport split_T(const ScatteringData& d) {
    const int n = d.grid_k.n;
    SplitReport r;
    r.T2_plus.assign(d.T_plus.size(), 0.0);
    r.T2_minus.assign(d.T_minus.size(), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const size_t q = static_cast<size_t>(i) * n + j;
            const double hp = j > i ? 1.0 : (j == i ? 0.5 : 0.0);
            const double hm = j < i ? 1.0 : (j == i ? 0.5 : 0.0);
            if (hp > 0) r.T2_plus[q] = d.T_plus[q] - hp * d.T1[q];
            if (hm > 0) r.T2_minus[q] = d.T_minus[q] + hm * d.T1[q];
        }
    r.norm_T2_plus = l2_norm_kl(r.T2_plus, d.grid_k, d.grid_l);
    r.norm_T2_minus = l2_norm_kl(r.T2_minus, d.grid_k, d.grid_l);
    const double np = l2_norm_kl(d.T_plus, d.grid_k, d.grid_l), nm = l2_norm_kl(d.T_minus, d.grid_k, d.grid_l);
    r.ratio_plus = np > 0 ? r.norm_T2_plus / np : 0.0;
    r.ratio_minus = nm > 0 ? r.norm_T2_minus / nm : 0.0;
    return r;
}

MuKGrowth diagnostic_mu_k_growth(const MuSharpField& mu) {
    const int n = mu.grid_k.n, ny = mu.yw.count, nl = mu.grid_l.n;
    const double dk = mu.grid_k.spacing(), dl = mu.grid_l.spacing();
    MuKGrowth g;
    for (int j = 0; j < ny; ++j) {
        double s = 0.0;
        for (int ik = 1; ik + 1 < n; ++ik)
            for (int m = 0; m < nl; ++m) s += std::norm((mu.at(ik + 1, m, j) - mu.at(ik - 1, m, j)) / (2.0 * dk));
        const double y = mu.yw.point(j);
        g.y.push_back(y);
        g.ratio.push_back(std::sqrt(s * dk * dl) / (1.0 + std::abs(y)));
        g.sup = std::max(g.sup, g.ratio.back());
    }
    return g;
}

void write_scattering(const std::string& dir, const ScatteringData& d) {
    std::filesystem::create_directories(dir);
    write_c128_blob(dir + "/T_plus.bin", d.T_plus);
    write_c128_blob(dir + "/T_minus.bin", d.T_minus);
    write_c128_blob(dir + "/T1.bin", d.T1);
    json j = d.meta;
    j["grid_k"] = grid_to_json(d.grid_k);
    j["grid_l"] = grid_to_json(d.grid_l);
    j["layout"] = "complex128 interleaved little-endian, row-major [k][l]";
    j["files"] = {"T_plus.bin", "T_minus.bin", "T1.bin"};
    write_json(dir + "/meta.json", j);
}

ScatteringData read_scattering(const std::string& dir) {
    ScatteringData d;
    d.meta = read_json(dir + "/meta.json");
    d.grid_k = grid_from_json(d.meta.at("grid_k"));
    d.grid_l = grid_from_json(d.meta.at("grid_l"));
    const size_t cnt = static_cast<size_t>(d.grid_k.n) * d.grid_l.n;
    d.T_plus = read_c128_blob(dir + "/T_plus.bin", cnt);
    d.T_minus = read_c128_blob(dir + "/T_minus.bin", cnt);
    d.T1 = read_c128_blob(dir + "/T1.bin", cnt);
    return d;
}

}  // namespace kpist
