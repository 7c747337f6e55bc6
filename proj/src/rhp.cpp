#include "kpist/rhp.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "kpist/fft.hpp"
#include "kpist/phase.hpp"
#include "kpist/quadrature.hpp"

namespace kpist {

namespace {

const cplx kI(0.0, 1.0);

double max_phase_rate(double a, double b, const ProbePoint& p) {
    double m = std::max(std::abs(phase_phi_prime(a, p.t, p.x, p.y)), std::abs(phase_phi_prime(b, p.t, p.x, p.y)));
    if (p.t != 0.0) {
        const double v = p.y / (12.0 * p.t);
        if (v > a && v < b) m = std::max(m, std::abs(phase_phi_prime(v, p.t, p.x, p.y)));
    }
    return m;
}

const CVec& row_kernel(const ScatteringData& d, Sign s) { return s == Sign::plus ? d.T_plus : d.T_minus; }

double dot_norm(const CVec& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace

cplx EvolvedData::kernel(Sign s, int i, int j) const {
    const double k = base->grid_k.point(i), l = base->grid_l.point(j);
    const cplx v = s == Sign::plus ? base->tp(i, j) : base->tm(i, j);
    return v * std::polar(1.0, 4.0 * t * (l * l * l - k * k * k));
}

CVec cauchy_project(const CVec& f, Sign sign) {
    const int n = static_cast<int>(f.size());
    CVec v = f;
    fft_forward(v);
    for (int m = 0; m < n; ++m) {
        const bool keep_plus = m <= n / 2;
        if (keep_plus != (sign == Sign::plus)) v[m] = 0.0;
    }
    fft_inverse(v);
    const double s = (sign == Sign::plus ? 1.0 : -1.0) / n;
    for (auto& z : v) z *= s;
    return v;
}

PhaseWeights phase_weights(const Grid1D& gk, const ProbePoint& p) {
    const GaussRule& gr = gauss_rule();
    PhaseWeights w;
    w.point = p;
    w.n = gk.n;
    w.dk = gk.spacing();
    const int n = gk.n, nc = n - 1;
    const double D = w.dk;
    w.emphi.resize(n);
    RVec phi(n);
    for (int i = 0; i < n; ++i) {
        phi[i] = phase_phi(gk.point(i), p.t, p.x, p.y);
        w.emphi[i] = std::polar(1.0, -phi[i]);
        w.resolution = std::max(w.resolution, std::abs(phase_phi_prime(gk.point(i), p.t, p.x, p.y)) * D);
    }
    w.resolution_flag = w.resolution > std::acos(-1.0) / 4.0;
    CVec ga(nc), gb(nc), gc(nc), gd(nc);
    w.ca.resize(nc);
    w.cb.resize(nc);
    w.UA.resize(nc);
    w.UB.resize(nc);
    w.UC.resize(nc);
    std::array<cplx, kGaussPoints> e{}, em{}, ems{};
    std::array<double, kGaussPoints> s{};
    for (int c = 0; c < nc; ++c) {
        const double kc = gk.point(c);
        const double d1 = phase_phi_prime(kc, p.t, p.x, p.y);
        const double d2 = -2.0 * p.y + 24.0 * p.t * kc;
        const double rate = max_phase_rate(kc, kc + D, p) * D;
        const int P = std::max(1, static_cast<int>(std::ceil(rate)));
        w.panels += P;
        cplx A = 0.0, B = 0.0, G = 0.0, Dl = 0.0, UA = 0.0, UB = 0.0, UC = 0.0, acc0 = 0.0, acc1 = 0.0;
        const double hw = 0.5 / P;
        for (int pn = 0; pn < P; ++pn) {
            for (int q = 0; q < kGaussPoints; ++q) {
                s[q] = (pn + 0.5 * (gr.x[q] + 1.0)) / P;
                const double h = s[q] * D;
                const double psi = h * (d1 + h * (0.5 * d2 + h * 4.0 * p.t));
                e[q] = std::polar(1.0, psi);
                em[q] = std::conj(e[q]);
                ems[q] = s[q] * em[q];
            }
            for (int q = 0; q < kGaussPoints; ++q) {
                cplx i0 = 0.0, i1 = 0.0;
                for (int r = 0; r < kGaussPoints; ++r) {
                    i0 += gr.S[q][r] * em[r];
                    i1 += gr.S[q][r] * ems[r];
                }
                i0 = acc0 + hw * i0;
                i1 = acc1 + hw * i1;
                const double wq = hw * gr.w[q];
                const cplx we = wq * e[q];
                A += (1.0 - s[q]) * we;
                B += s[q] * we;
                G += s[q] * (1.0 - s[q]) * we;
                Dl += s[q] * s[q] * we;
                UA += (1.0 - s[q]) * we * i0;
                UC += we * i1;
                UB += we * (s[q] * i0 - i1);
            }
            cplx t0 = 0.0, t1 = 0.0;
            for (int r = 0; r < kGaussPoints; ++r) {
                t0 += gr.w[r] * em[r];
                t1 += gr.w[r] * ems[r];
            }
            acc0 += hw * t0;
            acc1 += hw * t1;
        }
        const cplx base = D * std::polar(1.0, phi[c]);
        ga[c] = base * A;
        gb[c] = base * B;
        gc[c] = base * G;
        gd[c] = base * Dl;
        w.ca[c] = ga[c];
        w.cb[c] = gb[c];
        w.UA[c] = D * D * UA;
        w.UB[c] = D * D * UB;
        w.UC[c] = D * D * UC;
    }
    w.W.assign(n, 0.0);
    w.WL.assign(n, 0.0);
    w.WR.assign(n, 0.0);
    w.Wd.assign(n, 0.0);
    w.WLd.assign(n, 0.0);
    w.WRd.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        if (j > 0) {
            w.WL[j] = gb[j - 1];
            w.WLd[j] = gk.point(j - 1) * gb[j - 1] + D * gd[j - 1];
        }
        if (j < nc) {
            w.WR[j] = ga[j];
            w.WRd[j] = gk.point(j) * ga[j] + D * gc[j];
        }
        w.W[j] = w.WL[j] + w.WR[j];
        w.Wd[j] = w.WLd[j] + w.WRd[j];
    }
    return w;
}

RHPOperator::RHPOperator(const ScatteringData& data, const ProbePoint& p) : data_(&data), w_(phase_weights(data.grid_k, p)) {
    if (data.grid_k != data.grid_l) throw std::invalid_argument("RHPOperator: k and l grids must coincide");
}

CVec RHPOperator::apply_generic(Sign s, const CVec& g, bool deriv) const {
    const int n = w_.n;
    if (static_cast<int>(g.size()) != n) throw std::invalid_argument("apply_T: vector does not match the grid");
    const CVec& T = row_kernel(*data_, s);
    const CVec& Wside = s == Sign::plus ? w_.WR : w_.WL;
    const CVec& Wsided = s == Sign::plus ? w_.WRd : w_.WLd;
    CVec gw(n), gwd(n), out(n);
    for (int j = 0; j < n; ++j) {
        gw[j] = g[j] * w_.W[j];
        gwd[j] = g[j] * w_.Wd[j];
    }
    for (int i = 0; i < n; ++i) {
        const cplx* row = T.data() + static_cast<size_t>(i) * n;
        const int j0 = s == Sign::plus ? i : 0, j1 = s == Sign::plus ? n : i + 1;
        const double k = data_->grid_k.point(i);
        cplx a = 0.0, b = 0.0;
        for (int j = j0; j < j1; ++j) a += row[j] * gw[j];
        const cplx diag = row[i] * g[i];
        cplx v;
        if (deriv) {
            for (int j = j0; j < j1; ++j) b += row[j] * gwd[j];
            const cplx cw = 2.0 * Wside[i] - w_.W[i], cwd = 2.0 * Wsided[i] - w_.Wd[i];
            v = kI * (b - k * a) + kI * (cwd - k * cw) * diag;
        } else {
            v = a + (2.0 * Wside[i] - w_.W[i]) * diag;
        }
        out[i] = w_.emphi[i] * v;
    }
    return out;
}

CVec RHPOperator::apply_T(Sign s, const CVec& g) const { return apply_generic(s, g, false); }
CVec RHPOperator::apply_Tx(Sign s, const CVec& g) const { return apply_generic(s, g, true); }

CVec RHPOperator::apply_T_adjoint(Sign s, const CVec& h) const {
    const int n = w_.n;
    const CVec& T = row_kernel(*data_, s);
    const CVec& Wside = s == Sign::plus ? w_.WR : w_.WL;
    CVec hp(n), out(n, 0.0);
    for (int i = 0; i < n; ++i) hp[i] = std::conj(w_.emphi[i]) * h[i];
    for (int i = 0; i < n; ++i) {
        const cplx* row = T.data() + static_cast<size_t>(i) * n;
        const int j0 = s == Sign::plus ? i : 0, j1 = s == Sign::plus ? n : i + 1;
        for (int j = j0; j < j1; ++j) out[j] += std::conj(row[j]) * hp[i];
    }
    for (int j = 0; j < n; ++j) {
        const cplx cj = (2.0 * Wside[j] - w_.W[j]) * T[static_cast<size_t>(j) * n + j];
        out[j] = std::conj(w_.W[j]) * out[j] + std::conj(cj) * hp[j];
    }
    return out;
}

CVec RHPOperator::apply_CT(const CVec& g) const {
    CVec a = cauchy_project(apply_T(Sign::minus, g), Sign::plus);
    const CVec b = cauchy_project(apply_T(Sign::plus, g), Sign::minus);
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

CVec RHPOperator::apply_CT_adjoint(const CVec& h) const {
    CVec a = apply_T_adjoint(Sign::minus, cauchy_project(h, Sign::plus));
    const CVec b = apply_T_adjoint(Sign::plus, cauchy_project(h, Sign::minus));
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

CVec RHPOperator::apply_CTx(const CVec& g) const {
    CVec a = cauchy_project(apply_Tx(Sign::minus, g), Sign::plus);
    const CVec b = cauchy_project(apply_Tx(Sign::plus, g), Sign::minus);
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

double RHPOperator::ct_norm_estimate(int steps) const {
    const int n = w_.n;
    CVec v(n);
    for (int j = 0; j < n; ++j) v[j] = cplx(1.0 + 0.5 * std::cos(0.37 * j), 0.3 * std::sin(0.11 * j));
    double nv = dot_norm(v);
    double sigma = 0.0;
    for (int it = 0; it < steps; ++it) {
        for (auto& z : v) z /= nv;
        const CVec av = apply_CT(v);
        sigma = dot_norm(av);
        v = apply_CT_adjoint(av);
        nv = dot_norm(v);
        if (nv == 0.0) return 0.0;
    }
    return sigma;
}

double RHPOperator::hs_norm_T() const {
    return l2_norm_kl(data_->T_plus, data_->grid_k, data_->grid_l) + l2_norm_kl(data_->T_minus, data_->grid_k, data_->grid_l);
}

double RHPOperator::hs_norm_Tx() const {
    const int n = w_.n;
    double sp = 0.0, sm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double d = data_->grid_l.point(j) - data_->grid_k.point(i);
            sp += d * d * std::norm(data_->tp(i, j));
            sm += d * d * std::norm(data_->tm(i, j));
        }
    const double m = data_->grid_k.spacing() * data_->grid_l.spacing();
    return std::sqrt(sp * m) + std::sqrt(sm * m);
}

double grid_l2(const CVec& f, double d) {
    double s = 0.0;
    for (const auto& z : f) s += std::norm(z);
    return std::sqrt(s * d);
}

namespace {

// x = b + C_T x by Neumann iteration; returns the last iterate whose residual is below tol.
CVec neumann(const RHPOperator& op, const CVec& b, const RHPSettings& s, const CVec* initial, double& residual,
             int& iterations, std::vector<double>& ratios, const char* what) {
    const double d = op.weights().dk;
    CVec x = initial ? *initial : b;
    double prev = -1.0;
    std::vector<double> hist;
    for (int it = 1; it <= s.max_iter; ++it) {
        CVec next = op.apply_CT(x);
        double r2 = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            next[i] += b[i];
            r2 += std::norm(next[i] - x[i]);
        }
        const double r = std::sqrt(r2 * d);
        hist.push_back(r);
        if (prev > 1e-14) ratios.push_back(r / prev);
        prev = r;
        residual = r / std::max(1.0, grid_l2(x, d));
        iterations = it;
        if (residual <= s.tol) return x;
        x = std::move(next);
    }
    std::string msg = std::string(what) + ": no convergence; residuals:";
    for (double r : hist) msg += " " + fmt_double(r);
    throw std::runtime_error(msg);
}

}  // namespace

RHPSolution solve_mul(const RHPOperator& op, const RHPSettings& s, const CVec* initial) {
    RHPSolution sol;
    sol.point = op.point();
    const CVec ones(op.n(), 1.0);
    const CVec b = op.apply_CT(ones);
    sol.ct1_norm = grid_l2(b, op.weights().dk);
    sol.mu_minus_1 = neumann(op, b, s, initial, sol.residual_mu, sol.iterations, sol.ratio_history, "solve_mul");
    return sol;
}

void solve_dmul_dx(const RHPOperator& op, RHPSolution& sol, const RHPSettings& s, const CVec* initial) {
    if (!(sol.point == op.point())) throw std::invalid_argument("solve_dmul_dx: probe point mismatch");
    const int n = op.n();
    CVec mu(n);
    for (int i = 0; i < n; ++i) mu[i] = 1.0 + sol.mu_minus_1[i];
    const CVec b = op.apply_CTx(mu);
    sol.ctx1_norm = grid_l2(op.apply_CTx(CVec(n, 1.0)), op.weights().dk);
    std::vector<double> ratios;
    sol.dmu_dx = neumann(op, b, s, initial, sol.residual_dmu, sol.iterations_dmu, ratios, "solve_dmul_dx");
}

RHPSolution zero_rhp_solution(const ScatteringData& data, const ProbePoint& p) {
    RHPSolution sol;
    sol.point = p;
    sol.mu_minus_1.assign(data.n(), cplx(0.0));
    sol.dmu_dx.assign(data.n(), cplx(0.0));
    return sol;
}

RHPSolution solve_rhp(const ScatteringData& data, const ProbePoint& p, const RHPSettings& s, const RHPSolution* warm) {
    if (data.is_zero()) return zero_rhp_solution(data, p);
    const RHPOperator op(data, p);
    RHPSolution sol = solve_mul(op, s, warm ? &warm->mu_minus_1 : nullptr);
    solve_dmul_dx(op, sol, s, warm ? &warm->dmu_dx : nullptr);
    return sol;
}

double adjoint_identity_check(const ScatteringData& data, double x, double y, int power_steps) {
    const int n = data.n();
    const double D = data.grid_l.spacing();
    CVec ep(n);
    for (int i = 0; i < n; ++i) ep[i] = std::polar(1.0, phase_phi(data.grid_k.point(i), 0.0, x, y));
    // Mp, Mm: dense kernels e^{i(phi_j - phi_i)} T(k_i, l_j) D. E = Mp^H - Mm - Mm Mp^H.
    std::vector<cplx> Mm(static_cast<size_t>(n) * n), MpH(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx ph = ep[j] * std::conj(ep[i]) * D;
            Mm[static_cast<size_t>(i) * n + j] = ph * data.tm(i, j);
            MpH[static_cast<size_t>(j) * n + i] = std::conj(ph * data.tp(i, j));
        }
    std::vector<cplx> E(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        cplx* er = E.data() + static_cast<size_t>(i) * n;
        for (int j = 0; j < n; ++j) er[j] = MpH[static_cast<size_t>(i) * n + j] - Mm[static_cast<size_t>(i) * n + j];
        for (int m = 0; m < n; ++m) {
            const cplx a = Mm[static_cast<size_t>(i) * n + m];
            if (a == cplx(0.0)) continue;
            const cplx* br = MpH.data() + static_cast<size_t>(m) * n;
            for (int j = 0; j < n; ++j) er[j] -= a * br[j];
        }
    }
    CVec v(n), av(n), w(n);
    for (int j = 0; j < n; ++j) v[j] = cplx(1.0 + 0.5 * std::cos(0.37 * j), 0.3 * std::sin(0.11 * j));
    double sigma = 0.0;
    for (int it = 0; it < power_steps; ++it) {
        const double nv = dot_norm(v);
        if (nv == 0.0) return 0.0;
        for (auto& z : v) z /= nv;
        for (int i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (int j = 0; j < n; ++j) s += E[static_cast<size_t>(i) * n + j] * v[j];
            av[i] = s;
        }
        sigma = dot_norm(av);
        std::fill(w.begin(), w.end(), 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) w[j] += std::conj(E[static_cast<size_t>(i) * n + j]) * av[i];
        v = w;
    }
    return sigma;
}

void write_rhp_solutions(const std::string& dir, const std::vector<RHPSolution>& sols) {
    std::filesystem::create_directories(dir);
    CVec mu, dmu;
    for (const auto& s : sols) {
        mu.insert(mu.end(), s.mu_minus_1.begin(), s.mu_minus_1.end());
        dmu.insert(dmu.end(), s.dmu_dx.begin(), s.dmu_dx.end());
    }
    write_c128_blob(dir + "/mu_minus_1.bin", mu);
    write_c128_blob(dir + "/dmu_dx.bin", dmu);
    std::ofstream os(dir + "/summary.csv");
    if (!os) throw std::runtime_error("write_rhp_solutions: cannot write " + dir + "/summary.csv");
    os << "index,t,x,y,residual_mu,residual_dmu,iterations,iterations_dmu,ct1_norm,ctx1_norm\n";
    for (size_t i = 0; i < sols.size(); ++i) {
        const auto& s = sols[i];
        os << i << ',' << fmt_double(s.point.t) << ',' << fmt_double(s.point.x) << ',' << fmt_double(s.point.y) << ','
           << fmt_double(s.residual_mu) << ',' << fmt_double(s.residual_dmu) << ',' << s.iterations << ','
           << s.iterations_dmu << ',' << fmt_double(s.ct1_norm) << ',' << fmt_double(s.ctx1_norm) << '\n';
    }
}

}  // namespace kpist
