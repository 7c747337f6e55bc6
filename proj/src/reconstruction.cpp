#include "kpist/reconstruction.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kpist/parallel.hpp"

namespace kpist {

namespace {

const cplx kI(0.0, 1.0);

cplx f_at(const ScatteringData& d, int i, int j) { return d.tp(i, j) + d.tm(i, j); }

// sum_i conj(W_i) sum_j G_ij W_j for G_ij = i(l_j-k_i) f_ij h_j, plus the diagonal-cell kink correction.
cplx kink_integral(const ScatteringData& d, const PhaseWeights& w, const CVec* h) {
    const int n = d.n();
    cplx total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double k = d.grid_k.point(i);
        cplx row = 0.0;
        for (int j = 0; j < n; ++j) {
            const cplx hj = h ? (*h)[j] : cplx(1.0);
            row += (d.grid_l.point(j) - k) * f_at(d, i, j) * hj * w.W[j];
        }
        total += std::conj(w.W[i]) * kI * row;
    }
    for (int c = 0; c + 1 < n; ++c) {
        const double step = d.grid_l.point(c + 1) - d.grid_k.point(c);
        const cplx g_up = kI * step * f_at(d, c, c + 1) * (h ? (*h)[c + 1] : cplx(1.0));
        const cplx g_lo = -kI * step * f_at(d, c + 1, c) * (h ? (*h)[c] : cplx(1.0));
        total += g_up * (w.UB[c] - std::conj(w.ca[c]) * w.cb[c]);
        total += g_lo * (std::conj(w.UB[c]) - std::conj(w.cb[c]) * w.ca[c]);
    }
    return total;
}

// Same for G_ij = f_ij h_j, which jumps across the diagonal.
cplx jump_integral(const ScatteringData& d, const PhaseWeights& w, const CVec& h) {
    const int n = d.n();
    cplx total = 0.0;
    for (int i = 0; i < n; ++i) {
        cplx row = 0.0;
        for (int j = 0; j < n; ++j) row += f_at(d, i, j) * h[j] * w.W[j];
        total += std::conj(w.W[i]) * row;
    }
    for (int c = 0; c + 1 < n; ++c) {
        const cplx a = w.ca[c], b = w.cb[c];
        const cplx bil = f_at(d, c, c) * h[c] * std::conj(a) * a + f_at(d, c, c + 1) * h[c + 1] * std::conj(a) * b +
                         f_at(d, c + 1, c) * h[c] * std::conj(b) * a +
                         f_at(d, c + 1, c + 1) * h[c + 1] * std::conj(b) * b;
        const cplx up = 2.0 * d.tp(c, c) * h[c] * w.UA[c] + d.tp(c, c + 1) * h[c + 1] * w.UB[c] +
                        2.0 * d.tp(c + 1, c + 1) * h[c + 1] * w.UC[c];
        const cplx lo = 2.0 * d.tm(c, c) * h[c] * std::conj(w.UA[c]) + d.tm(c + 1, c) * h[c] * std::conj(w.UB[c]) +
                        2.0 * d.tm(c + 1, c + 1) * h[c + 1] * std::conj(w.UC[c]);
        total += up + lo - bil;
    }
    return total;
}

}  // namespace

cplx eval_u1(const ScatteringData& data, const PhaseWeights& w) {
    if (w.n != data.n()) throw std::invalid_argument("eval_u1: weights do not match the data grid");
    return kink_integral(data, w, nullptr) / std::numbers::pi;
}

cplx eval_u1(const EvolvedData& data, double x, double y) {
    return eval_u1(*data.base, phase_weights(data.base->grid_k, {data.t, x, y}));
}

cplx eval_u2(const ScatteringData& data, const PhaseWeights& w, const RHPSolution& rhp) {
    if (!(rhp.point == w.point)) throw std::invalid_argument("eval_u2: RHP solution belongs to another probe point");
    if (static_cast<int>(rhp.mu_minus_1.size()) != data.n() || static_cast<int>(rhp.dmu_dx.size()) != data.n())
        throw std::invalid_argument("eval_u2: RHP solution does not match the data grid");
    return (kink_integral(data, w, &rhp.mu_minus_1) + jump_integral(data, w, rhp.dmu_dx)) / std::numbers::pi;
}

cplx eval_u2(const EvolvedData& data, double x, double y, const RHPSolution& rhp) {
    return eval_u2(*data.base, phase_weights(data.base->grid_k, {data.t, x, y}), rhp);
}

ReconstructionSample reconstruct(const ScatteringData& data, const ProbePoint& p, const ReconstructSettings& s,
                                 RHPSolution* warm) {
    ReconstructionSample r;
    r.point = p;
    if (p.t > 0) {
        r.ray = ray_coordinates(p.x / p.t, p.y / p.t);
        r.region = classify(r.ray.xi, r.ray.eta, s.delta);
    } else {
        r.region = RegionLabel{Region::transition, s.delta};
    }
    if (data.is_zero()) {
        if (warm) *warm = zero_rhp_solution(data, p);
        return r;
    }
    const RHPOperator op(data, p);
    const bool use = warm && static_cast<int>(warm->mu_minus_1.size()) == data.n();
    RHPSolution sol = solve_mul(op, s.rhp, use ? &warm->mu_minus_1 : nullptr);
    solve_dmul_dx(op, sol, s.rhp, use ? &warm->dmu_dx : nullptr);
    r.u1 = eval_u1(data, op.weights());
    r.u2 = eval_u2(data, op.weights(), sol);
    r.u = r.u1 + r.u2;
    r.residual_mu = sol.residual_mu;
    r.residual_dmu = sol.residual_dmu;
    r.iterations = sol.iterations;
    r.resolution_flag = op.weights().resolution_flag;
    if (warm) *warm = std::move(sol);
    return r;
}

std::vector<ReconstructionSample> reconstruct_many(const ScatteringData& data, const std::vector<ProbePoint>& probes,
                                                   const ReconstructSettings& s) {
    std::vector<ReconstructionSample> out(probes.size());
    parallel_for(static_cast<int>(probes.size()), [&](int i) { out[i] = reconstruct(data, probes[i], s); });
    return out;
}

double linear_kp(const FullTransform& uh, double t, double x, double y) {
    const int np = uh.grid_p.n, nq = uh.grid_q.n;
    double mx = 0.0;
    for (const auto& v : uh.values) mx = std::max(mx, std::abs(v));
    const int m0 = nearest_index(uh.grid_p, 0.0, 1e-9 * uh.grid_p.spacing());
    if (m0 >= 0)
        for (int iq = 0; iq < nq; ++iq)
            if (std::abs(uh.at(m0, iq)) > 1e-8 * mx)
                throw std::invalid_argument("linear_kp: spectrum does not vanish on p = 0 (data not zero-mean in x)");
    CVec eq(nq);
    for (int iq = 0; iq < nq; ++iq) eq[iq] = std::polar(1.0, uh.grid_q.point(iq) * y);
    double acc = 0.0;
    for (int mp = 0; mp < np; ++mp) {
        if (mp == m0) continue;
        const double p = uh.grid_p.point(mp);
        cplx row = 0.0;
        for (int iq = 0; iq < nq; ++iq) {
            const double q = uh.grid_q.point(iq);
            row += uh.at(mp, iq) * eq[iq] * std::polar(1.0, t * (p * p * p + 3.0 * q * q / p));
        }
        acc += (std::polar(1.0, p * x) * row).real();
    }
    return acc * uh.grid_p.spacing() * uh.grid_q.spacing() / (2.0 * std::numbers::pi);
}

double linear_kp(const PotentialField& u0, double t, double x, double y) { return linear_kp(full_fourier(u0), t, x, y); }

ScatteringData linear_scattering_data(const PotentialField& u0, const Grid1D& gk) {
    const LinearizedT lin = linearized_T(u0, gk);
    ScatteringData d;
    d.grid_k = gk;
    d.grid_l = gk;
    const int n = gk.n;
    d.T_plus.assign(static_cast<size_t>(n) * n, 0.0);
    d.T_minus.assign(static_cast<size_t>(n) * n, 0.0);
    d.T1 = lin.values;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const size_t q = static_cast<size_t>(i) * n + j;
            if (j > i) d.T_plus[q] = lin.values[q];
            if (j < i) d.T_minus[q] = -lin.values[q];
            if (j == i) {
                d.T_plus[q] = 0.5 * lin.values[q];
                d.T_minus[q] = -0.5 * lin.values[q];
            }
        }
    d.meta = json{{"format", "kpist-scattering-v1"}, {"linear", true}, {"out_of_domain", lin.out_of_domain}};
    return d;
}

double linear_kp_kl(const ScatteringData& lin, double t, double x, double y) {
    return eval_u1(lin, phase_weights(lin.grid_k, {t, x, y})).real();
}

}  // namespace kpist
