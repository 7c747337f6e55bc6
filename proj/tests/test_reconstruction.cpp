#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "fixtures.hpp"
#include "kpist/reconstruction.hpp"

using namespace kpist;
namespace fx = kpist::fixtures;

namespace {

// max |u2| / (eps max |u1|) over kQuadProbes, measured at eps = 0.01.
constexpr double kQuadraticK = 0.9303;
const std::vector<ProbePoint> kQuadProbes{{0, 0, 0}, {0, 1, 0}, {5, 0, 0}, {5, -10, 2}, {10, -30, 0}};

std::vector<std::pair<double, double>> core_points(double step, int half) {
    std::vector<std::pair<double, double>> pts;
    for (int i = -half; i <= half; ++i)
        for (int j = -half; j <= half; ++j) pts.emplace_back(step * i, step * j);
    return pts;
}

double u0_at(const PotentialField& u, double x, double y) {
    return u.at(nearest_index(u.grid_x, x), nearest_index(u.grid_y, y));
}

// Reference profile on the box [-128, 128]^2, where periodic images do not reach the core by t = 5.
const FullTransform& padded_spectrum(double eps) {
    static std::map<double, FullTransform> cache;
    auto it = cache.find(eps);
    if (it == cache.end()) {
        const Grid1D g = Grid1D::symmetric(128.0, 1024);
        it = cache.emplace(eps, full_fourier(make_test_potential(PotentialKind::gaussian_dx, eps, 2.0, g, g))).first;
    }
    return it->second;
}

// (1/pi) int int e^{i(phi(l)-phi(k))} f (mu(l)-1) dl dk, through the jump quadrature of eval_u2.
cplx nonlocal_integral(const ScatteringData& d, const ProbePoint& p) {
    RHPSettings s;
    s.tol = 1e-14;
    RHPSolution sol = solve_mul(RHPOperator(d, p), s);
    sol.dmu_dx = sol.mu_minus_1;
    std::fill(sol.mu_minus_1.begin(), sol.mu_minus_1.end(), cplx(0.0));
    return eval_u2(d, phase_weights(d.grid_k, p), sol);
}

}  // namespace

TEST(Reconstruct, ZeroDataGivesZero) {
    for (const ProbePoint& p : std::vector<ProbePoint>{{0, 0, 0}, {3, 1, -2}, {20, -40, 10}}) {
        const ReconstructionSample r = reconstruct(fx::zero_data(), p);
        EXPECT_EQ(r.u, cplx(0.0));
        EXPECT_EQ(r.u2, cplx(0.0));
    }
}

TEST(Reconstruct, SumIsExact) {
    const auto rs = reconstruct_many(fx::reference_data(0.05), kQuadProbes);
    for (const auto& r : rs) EXPECT_EQ(r.u, r.u1 + r.u2);
}

TEST(Reconstruct, RegionLabels) {
    const ScatteringData& d = fx::reference_data(0.05);
    EXPECT_EQ(reconstruct(d, {0, 1, 0}).region.label, Region::transition);
    EXPECT_EQ(reconstruct(d, {10, 10, 0}).region.label, Region::rapid_decay);
    EXPECT_EQ(reconstruct(d, {10, -30, 0}).region.label, Region::oscillatory);
    EXPECT_NEAR(reconstruct(d, {10, -30, 0}).ray.a, -0.25, 1e-15);
}

TEST(EvalU1, ZeroData) {
    EXPECT_EQ(eval_u1(EvolvedData{&fx::zero_data(), 2.0}, 1.0, -1.0), cplx(0.0));
}

TEST(EvalU1, LinearOrderAtTimeZero) {
    for (double eps : {0.01, 0.05}) {
        const PotentialField u0 = fx::reference_potential(eps);
        const EvolvedData ev{&fx::reference_data(eps), 0.0};
        double err = 0.0, scale = 0.0;
        for (auto [x, y] : core_points(0.5, 8)) {
            const double v = u0_at(u0, x, y);
            err = std::max(err, std::abs(eval_u1(ev, x, y).real() - v));
            scale = std::max(scale, std::abs(v));
        }
        EXPECT_LE(err / scale, 10.0 * eps) << eps;
    }
}

TEST(EvalU1, MatchesLinearSolutionAtTimeFive) {
    const double eps = 0.01;
    const EvolvedData ev{&fx::reference_data(eps), 5.0};
    double err = 0.0, scale = 0.0;
    for (auto [x, y] : core_points(3.0, 4)) {
        const double v = linear_kp(padded_spectrum(eps), 5.0, x, y);
        err = std::max(err, std::abs(eval_u1(ev, x, y).real() - v));
        scale = std::max(scale, std::abs(v));
    }
    EXPECT_LE(err / scale, 10.0 * eps);
}

TEST(EvalU2, RejectsMismatchedProbe) {
    const ScatteringData& d = fx::reference_data(0.05);
    const RHPSolution s = solve_rhp(d, {0, 0, 0});
    EXPECT_THROW(eval_u2(EvolvedData{&d, 0.0}, 1.0, 0.0, s), std::invalid_argument);
    EXPECT_THROW(eval_u2(EvolvedData{&d, 1.0}, 0.0, 0.0, s), std::invalid_argument);
}

TEST(EvalU2, QuadraticInData) {
    RVec logs, logr;
    for (double eps : {0.01, 0.02, 0.05}) {
        double a = 0.0, b = 0.0;
        for (const auto& r : reconstruct_many(fx::reference_data(eps), kQuadProbes)) {
            a = std::max(a, std::abs(r.u2));
            b = std::max(b, std::abs(r.u1));
        }
        const double k = a / (eps * b);
        if (eps == 0.01) EXPECT_NEAR(k / kQuadraticK, 1.0, 0.02);
        else EXPECT_LE(k, 1.1 * kQuadraticK) << eps;
        logs.push_back(std::log(eps));
        logr.push_back(std::log(a / b));
    }
    const double slope = (logr[2] - logr[0]) / (logs[2] - logs[0]);
    EXPECT_NEAR(slope, 1.0, 0.1);
}

TEST(EvalU2, RapidRegionDecaysLikeInverseSquare) {
    const ScatteringData& d = fx::reference_data(0.05);
    const double a = std::abs(reconstruct(d, {25, 25, 0}).u2), b = std::abs(reconstruct(d, {50, 50, 0}).u2);
    EXPECT_NEAR(a / b, 4.0, 1.2) << a << " " << b;
}

TEST(EvalU2, ExpandedFormMatchesDerivativeOfNonlocalForm) {
    const ScatteringData& d = fx::reference_data(0.05);
    const ProbePoint p{0.0, 1.0, 0.0};
    ReconstructSettings s;
    s.rhp.tol = 1e-14;
    const cplx u2 = reconstruct(d, p, s).u2;
    const double h = 0.05;
    const cplx fd = (nonlocal_integral(d, {p.t, p.x + h, p.y}) - nonlocal_integral(d, {p.t, p.x - h, p.y})) / (2.0 * h);
    EXPECT_LE(std::abs(fd - u2) / std::abs(u2), 1e-2);
}

TEST(Reconstruct, RoundTripAtTimeZero) {
    const PotentialField u0 = fx::reference_potential(0.05);
    std::vector<ProbePoint> probes;
    for (auto [x, y] : core_points(0.5, 8)) probes.push_back({0.0, x, y});
    const auto rs = reconstruct_many(fx::reference_data(0.05), probes);
    double err = 0.0, scale = 0.0;
    for (const auto& r : rs) {
        const double v = u0_at(u0, r.point.x, r.point.y);
        err = std::max(err, std::abs(r.u.real() - v));
        scale = std::max(scale, std::abs(v));
    }
    EXPECT_LE(err / scale, 0.05);
}

TEST(Reconstruct, RealForRealData) {
    std::vector<ProbePoint> probes{{0, 0, 0}, {0, 1, 1}, {2, -3, 1}, {10, -30, 0}, {10, 10, 0}, {50, 150, 0}};
    for (const auto& r : reconstruct_many(fx::reference_data(0.05), probes))
        EXPECT_LE(std::abs(r.u.imag()), 1e-4 * std::max(1.0, std::abs(r.u.real())));
}

TEST(Reconstruct, SecondOrderUnderKRefinement) {
    const PotentialField u = fx::small_box_potential(0.05, 128);
    const std::vector<ProbePoint> probes{{0, 1, 0}, {2, -3, 1}, {5, -10, 2}};
    std::vector<std::vector<ReconstructionSample>> runs;
    for (int nk : {128, 256, 512}) {
        ScatteringSettings s;
        s.n_k = nk;
        runs.push_back(reconstruct_many(scatter(u, s), probes));
    }
    for (size_t i = 0; i < probes.size(); ++i) {
        const double d1 = std::abs(runs[1][i].u - runs[0][i].u), d2 = std::abs(runs[2][i].u - runs[1][i].u);
        EXPECT_LE(2.0 * d2, d1) << "probe " << i;
    }
}

TEST(LinearKP, IdentityAtTimeZero) {
    const PotentialField u0 = fx::reference_potential(0.05);
    const FullTransform uh = full_fourier(u0);
    for (auto [x, y] : core_points(1.0, 6)) EXPECT_NEAR(linear_kp(uh, 0.0, x, y), u0_at(u0, x, y), 1e-8);
}

TEST(LinearKP, UnitaryEvolution) {
    const Grid1D g = Grid1D::symmetric(8.0, 64);
    const PotentialField u0 = make_test_potential(PotentialKind::gaussian_dx, 0.05, 2.0, g, g);
    const FullTransform uh = full_fourier(u0);
    double n0 = 0.0, nt = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            n0 += u0.at(i, j) * u0.at(i, j);
            const double v = linear_kp(uh, 3.0, g.point(i), g.point(j));
            nt += v * v;
        }
    EXPECT_NEAR(std::sqrt(nt / n0), 1.0, 1e-8);
}

TEST(LinearKP, RejectsNonzeroMean) {
    const Grid1D g = Grid1D::symmetric(16.0, 128);
    PotentialField u = make_test_potential(PotentialKind::gaussian_dx, 0.05, 2.0, g, g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            u.values[static_cast<size_t>(i) * g.n + j] = 0.05 * std::exp(-(g.point(i) * g.point(i) + g.point(j) * g.point(j)) / 8.0);
    EXPECT_THROW(linear_kp(u, 1.0, 0.0, 0.0), std::invalid_argument);
}

TEST(LinearKP, RoutesAgree) {
    const PotentialField u0 = fx::reference_potential(0.05);
    const FullTransform uh = full_fourier(u0);
    const ScatteringData lin = linear_scattering_data(u0, fx::reference_data(0.05).grid_k);
    double err = 0.0, scale = 0.0;
    for (auto [x, y] : core_points(2.0, 3)) {
        const double a = linear_kp(uh, 1.0, x, y);
        err = std::max(err, std::abs(a - linear_kp_kl(lin, 1.0, x, y)));
        scale = std::max(scale, std::abs(a));
    }
    EXPECT_LE(err / scale, 1e-6);
}

TEST(LinearKP, KLRouteMatchesPaddedFourierRoute) {
    const PotentialField u0 = fx::reference_potential(0.05);
    const ScatteringData lin = linear_scattering_data(u0, fx::reference_data(0.05).grid_k);
    double err = 0.0, scale = 0.0;
    for (auto [x, y] : core_points(3.0, 3)) {
        const double a = linear_kp(padded_spectrum(0.05), 5.0, x, y);
        err = std::max(err, std::abs(a - linear_kp_kl(lin, 5.0, x, y)));
        scale = std::max(scale, std::abs(a));
    }
    EXPECT_LE(err / scale, 0.05);
}
