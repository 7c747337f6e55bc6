#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "kpist/oracle.hpp"

using namespace kpist;
namespace fx = kpist::fixtures;

namespace {

double rel_linf(const RVec& a, const RVec& b) {
    double m = 0.0, s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
        s = std::max(s, std::abs(b[i]));
    }
    return m / s;
}

}  // namespace

TEST(Oracle, DispersionRelation) {
    EXPECT_EQ(oracle_omega(0.0, 3.0), 0.0);
    EXPECT_DOUBLE_EQ(oracle_omega(2.0, 1.0), 8.0 + 1.5);
    EXPECT_DOUBLE_EQ(oracle_omega(-2.0, 1.0), -oracle_omega(2.0, 1.0));
    const OracleState s = make_oracle_state(fx::small_box_potential(0.05, 128));
    EXPECT_DOUBLE_EQ(oracle_dt_bound(s), 0.5 / oracle_max_omega(s));
}

TEST(Oracle, ZeroStateStaysZero) {
    OracleState s = make_oracle_state(fx::zero_potential());
    for (int i = 0; i < 3; ++i) oracle_step(s, 1e-4);
    EXPECT_EQ(fx::max_abs(s.u_hat), 0.0);
    EXPECT_EQ(oracle_l2(s), 0.0);
}

TEST(Oracle, ZeroTimeReturnsInitialData) {
    const PotentialField u0 = fx::small_box_potential(0.05, 128);
    const EvolveResult r = evolve(u0, 0.0, 0.0);
    EXPECT_EQ(r.steps, 0);
    EXPECT_EQ(r.field.values, u0.values);
    EXPECT_THROW(evolve(u0, -1.0, 0.0), std::invalid_argument);
}

TEST(Oracle, LinearRegimeMatchesLinearSolution) {
    const PotentialField u0 = fx::small_box_potential(1e-4, 128);
    const EvolveResult r = evolve(u0, 1.0, 0.0);
    const FullTransform uh = full_fourier(u0);
    RVec lin, orc;
    for (int i = 0; i < u0.grid_x.n; i += 4)
        for (int j = 0; j < u0.grid_y.n; j += 4) {
            lin.push_back(linear_kp(uh, 1.0, u0.grid_x.point(i), u0.grid_y.point(j)));
            orc.push_back(r.field.at(i, j));
        }
    EXPECT_LE(rel_linf(orc, lin), 1e-3);
}

TEST(Oracle, FourthOrderInTime) {
    const PotentialField u0 = fx::small_box_potential(4.0, 128);
    const double b = oracle_dt_bound(make_oracle_state(u0));
    const RVec a = evolve(u0, 0.1, b, 1.0).field.values;
    const RVec h = evolve(u0, 0.1, 0.5 * b, 1.0).field.values;
    const RVec q = evolve(u0, 0.1, 0.25 * b, 1.0).field.values;
    const double ratio = rel_linf(a, h) / rel_linf(h, q);
    EXPECT_NEAR(ratio, 16.0, 0.3 * 16.0);
    EXPECT_GE(std::log2(ratio), 3.5);
}

TEST(Oracle, ConservesL2OnReferenceBox) {
    const EvolveResult& r = fx::reference_evolution(0.05, 1.0);
    EXPECT_LE(r.drift, 1e-6);
    EXPECT_EQ(r.times.size(), r.l2.size());
    EXPECT_NEAR(r.times.back(), 1.0, 1e-12);
}

TEST(Oracle, ZeroMeanPreservedExactly) {
    OracleState s = make_oracle_state(fx::small_box_potential(0.5, 128));
    for (int i = 0; i < 20; ++i) oracle_step(s, oracle_dt_bound(s));
    for (int j = 0; j < s.grid_y.n; ++j) EXPECT_EQ(s.u_hat[j], cplx(0.0));
}

TEST(Oracle, RejectsStepAboveBound) {
    OracleState s = make_oracle_state(fx::small_box_potential(0.05, 128));
    EXPECT_THROW(oracle_step(s, 2.0 * oracle_dt_bound(s)), std::invalid_argument);
    EXPECT_THROW(oracle_step(s, 0.0), std::invalid_argument);
}

TEST(Oracle, RejectsNonFiniteSpectrum) {
    OracleState s = make_oracle_state(fx::small_box_potential(0.05, 128));
    s.u_hat[static_cast<size_t>(1) * s.grid_y.n + 1] = std::numeric_limits<double>::quiet_NaN();
    try {
        oracle_step(s, 0.5 * oracle_dt_bound(s));
        FAIL() << "expected an error";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("max |u_hat|"), std::string::npos);
    }
}

TEST(Oracle, DriftViolationThrows) {
    EXPECT_THROW(evolve(fx::small_box_potential(4.0, 128), 0.05, 0.0, 1e-300), std::runtime_error);
}
