#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "fixtures.hpp"
#include "kpist/fft.hpp"
#include "kpist/transform.hpp"

using namespace kpist;
namespace fx = kpist::fixtures;

namespace {

constexpr double kPi = std::numbers::pi;

PotentialField custom_field(const Grid1D& gx, const Grid1D& gy, double (*f)(double, double)) {
    PotentialField u;
    u.grid_x = gx;
    u.grid_y = gy;
    u.values.resize(static_cast<size_t>(gx.n) * gy.n);
    for (int i = 0; i < gx.n; ++i)
        for (int j = 0; j < gy.n; ++j) u.values[static_cast<size_t>(i) * gy.n + j] = f(gx.point(i), gy.point(j));
    return u;
}

double odd_gaussian(double x, double y) { return x * std::exp(-0.5 * x * x) * std::exp(-y * y); }
double plain_gaussian(double x, double y) { return std::exp(-0.5 * x * x) * std::exp(-y * y); }

double rel_l2(const RVec& a, const RVec& b) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST(Grid, InvariantsAndDual) {
    const Grid1D g = Grid1D::symmetric(32.0, 256);
    EXPECT_DOUBLE_EQ(g.spacing(), 0.25);
    EXPECT_DOUBLE_EQ(g.min, -g.max);
    const Grid1D d = g.dual();
    EXPECT_NEAR(d.spacing(), 2.0 * kPi / (256 * 0.25), 1e-15);
    EXPECT_EQ(d.n, 256);
    EXPECT_NO_THROW(g.validate());
    EXPECT_THROW((Grid1D{-1.0, 1.0, 6}).validate(), std::invalid_argument);
    EXPECT_THROW((Grid1D{-1.0, 1.0, 24}).validate(), std::invalid_argument);
    EXPECT_THROW((Grid1D{-1.0, 2.0, 16}).validate(), std::invalid_argument);
    EXPECT_EQ(nearest_index(g, 0.0), 128);
    EXPECT_EQ(nearest_index(g, 0.1), -1);
}

TEST(Fft, ForwardInverseRoundTrip) {
    CVec v = fx::random_band_limited(64, 7, 20), w = v;
    fft_forward(w);
    fft_inverse(w);
    for (size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(std::abs(w[i] / 64.0 - v[i]), 0.0, 1e-14);
}

TEST(PartialFourier, ZeroFieldGivesZero) {
    const PartialTransform ut = partial_fourier_x(fx::zero_potential());
    for (const auto& z : ut.values) EXPECT_EQ(z, cplx(0.0));
}

TEST(PartialFourier, GaussianProfile) {
    // The zero-mean invariant excludes e^{-x^2/2}; its derivative form x e^{-x^2/2} maps to -i l e^{-l^2/2}.
    const Grid1D gx = Grid1D::symmetric(16.0, 128), gy = Grid1D::symmetric(8.0, 64);
    EXPECT_THROW(partial_fourier_x(custom_field(gx, gy, plain_gaussian)), std::invalid_argument);
    const PartialTransform ut = partial_fourier_x(custom_field(gx, gy, odd_gaussian));
    double err = 0.0;
    for (int j = 0; j < gy.n; ++j)
        for (int m = 0; m < ut.grid_l.n; ++m) {
            const double l = ut.grid_l.point(m), y = gy.point(j);
            const cplx want = cplx(0.0, -l) * std::exp(-0.5 * l * l) * std::exp(-y * y);
            err = std::max(err, std::abs(ut.at(m, j) - want));
        }
    EXPECT_LT(err, 1e-8);
}

TEST(PartialFourier, CenteredDifferenceIsSecondOrder) {
    auto error_at = [](int n) {
        const Grid1D gx = Grid1D::symmetric(16.0, n), gy = Grid1D::symmetric(8.0, 16);
        PotentialField u = custom_field(gx, gy, odd_gaussian), du = u;
        const double h = gx.spacing();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < gy.n; ++j)
                du.values[static_cast<size_t>(i) * gy.n + j] =
                    (u.at((i + 1) % n, j) - u.at((i + n - 1) % n, j)) / (2.0 * h);
        const PartialTransform a = partial_fourier_x(u), b = partial_fourier_x(du);
        double err = 0.0;
        for (int j = 0; j < gy.n; ++j)
            for (int m = 0; m < n; ++m) {
                const double l = a.grid_l.point(m);
                if (std::abs(l) > 3.0) continue;
                err = std::max(err, std::abs(b.at(m, j) - cplx(0.0, l) * a.at(m, j)));
            }
        return err;
    };
    const double e1 = error_at(128), e2 = error_at(256);
    EXPECT_NEAR(e1 / e2, 4.0, 0.4);
}

TEST(PartialFourier, RoundTripAndParseval) {
    for (auto kind : {PotentialKind::gaussian_dx, PotentialKind::cosine_packet}) {
        const Grid1D g = Grid1D::symmetric(16.0, 128);
        const PotentialField u = make_test_potential(kind, 0.05, 2.0, g, g);
        const PartialTransform ut = partial_fourier_x(u);
        EXPECT_LT(rel_l2(inverse_partial_fourier_x(ut, u.grid_x), u.values), 1e-10);
        EXPECT_NEAR(l2_norm(ut) / l2_norm(u), 1.0, 1e-10);
    }
}

TEST(PartialFourier, RejectsNonFiniteWithIndex) {
    PotentialField u = fx::zero_potential();
    u.values[3 * u.grid_y.n + 5] = std::nan("");
    try {
        partial_fourier_x(u);
        FAIL() << "expected rejection";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("(3, 5)"), std::string::npos) << e.what();
    }
}

TEST(PartialFourier, ResampledGridMatchesDual) {
    const PotentialField u = fx::small_box_potential(0.05, 128);
    const PartialTransform full = partial_fourier_x(u);
    const Grid1D dual = u.grid_x.dual();
    const Grid1D coarse{dual.min, dual.max, 64};
    const PartialTransform c = partial_fourier_x(u, coarse);
    for (int j = 0; j < u.grid_y.n; j += 7)
        for (int m = 0; m < 64; ++m) EXPECT_NEAR(std::abs(c.at(m, j) - full.at(2 * m, j)), 0.0, 1e-15);
}

TEST(FullFourier, ZeroHermitianParsevalRoundTrip) {
    const PotentialField z = fx::zero_potential();
    for (const auto& v : full_fourier(z).values) EXPECT_EQ(v, cplx(0.0));
    const Grid1D g = Grid1D::symmetric(16.0, 128);
    const PotentialField u = make_test_potential(PotentialKind::cosine_packet, 0.05, 2.0, g, g, 1.3);
    const FullTransform uh = full_fourier(u);
    const int n = g.n;
    double herm = 0.0, s = 0.0;
    for (int m = 1; m < n; ++m)
        for (int k = 1; k < n; ++k) herm = std::max(herm, std::abs(uh.at(n - m, n - k) - std::conj(uh.at(m, k))));
    for (const auto& v : uh.values) s += std::norm(v);
    EXPECT_LT(herm, 1e-12 * fx::max_abs(uh.values));
    EXPECT_NEAR(std::sqrt(s * uh.grid_p.spacing() * uh.grid_q.spacing()) / l2_norm(u), 1.0, 1e-10);
    EXPECT_LT(rel_l2(inverse_full_fourier(uh, g, g), u.values), 1e-10);
}

TEST(FullFourier, SeparableGaussianIsProductOf1D) {
    const Grid1D gx = Grid1D::symmetric(16.0, 128), gy = Grid1D::symmetric(8.0, 64);
    const FullTransform uh = full_fourier(custom_field(gx, gy, odd_gaussian));
    double err = 0.0;
    for (int m = 0; m < gx.n; ++m)
        for (int k = 0; k < gy.n; ++k) {
            const double p = uh.grid_p.point(m), q = uh.grid_q.point(k);
            // 1D: x e^{-x^2/2} -> -i p e^{-p^2/2}; e^{-y^2} -> e^{-q^2/4}/sqrt(2)
            const cplx want = cplx(0.0, -p) * std::exp(-0.5 * p * p) * std::exp(-0.25 * q * q) / std::sqrt(2.0);
            err = std::max(err, std::abs(uh.at(m, k) - want));
        }
    EXPECT_LT(err, 1e-8);
}

TEST(Conditions, ZeroPotential) {
    const ConditionsReport r = check_conditions(fx::zero_potential());
    EXPECT_EQ(r.c, 0.0);
    EXPECT_EQ(r.c_tilde, 0.0);
    EXPECT_EQ(r.w_norm, 0.0);
    EXPECT_TRUE(r.pass);
}

TEST(Conditions, HomogeneousInAmplitude) {
    const ConditionsReport a = check_conditions(fx::small_box_potential(0.01, 128));
    const ConditionsReport b = check_conditions(fx::small_box_potential(0.04, 128));
    EXPECT_NEAR(b.c / a.c, 4.0, 4e-12);
    EXPECT_NEAR(b.c_tilde / a.c_tilde, 4.0, 4e-12);
    EXPECT_NEAR(b.w_norm / a.w_norm, 4.0, 4e-12);
    EXPECT_NEAR(b.e1w_norm / a.e1w_norm, 4.0, 4e-12);
}

TEST(Conditions, ReferenceProfilePassesAndMatchesDenseOracle) {
    const ConditionsReport r = check_conditions(fx::reference_potential(0.05));
    EXPECT_TRUE(r.pass) << r.diagnostic;
    EXPECT_FALSE(r.l0_flag);
    EXPECT_EQ(r.pass, r.c < 1 && r.c_tilde < 1 && r.w_norm < (1 - r.c) / 4);
    // Dense trapezoid oracle with |u~(l, y)| = eps w |l| e^{-l^2 w^2/2} e^{-y^2/(2w^2)}.
    const double eps = 0.05, w = 2.0;
    double cl = 0.0, cy = 0.0;
    const int n = 400000;
    const double L = 40.0, h = 2 * L / n;
    for (int i = 0; i <= n; ++i) {
        const double s = -L + i * h, wt = (i == 0 || i == n) ? 0.5 : 1.0;
        cl += wt * h * std::abs(s) * w * std::exp(-0.5 * s * s * w * w);
        cy += wt * h * std::exp(-s * s / (2 * w * w));
    }
    const double c_oracle = eps * cl * cy / std::sqrt(2.0 * kPi);
    EXPECT_NEAR(r.c / c_oracle, 1.0, 5e-3);
}

TEST(Potential, ZeroAmplitudeOddnessAndNorm) {
    const Grid1D g = fx::reference_grid(256);
    const PotentialField z = make_test_potential(PotentialKind::gaussian_dx, 0.0, 2.0, g, g);
    EXPECT_EQ(z.max_abs(), 0.0);
    const PotentialField u = fx::reference_potential(0.05);
    double odd = 0.0;
    for (int i = 1; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) odd = std::max(odd, std::abs(u.at(g.n - i, j) + u.at(i, j)));
    EXPECT_LT(odd, 1e-14);
    // ||eps x/w^2 e^{-(x^2+y^2)/(2w^2)}||^2 = eps^2 pi / 2
    EXPECT_NEAR(l2_norm(u), 0.05 * std::sqrt(kPi / 2.0), 1e-12);
    EXPECT_THROW(make_test_potential(PotentialKind::gaussian_dx, 0.05, 1.0, g, g), std::invalid_argument);
    EXPECT_THROW(make_test_potential(PotentialKind::gaussian_dx, -1.0, 2.0, g, g), std::invalid_argument);
}

TEST(Potential, FileRoundTrip) {
    const std::string dir = fx::temp_dir("potential");
    const PotentialField u = fx::small_box_potential(0.05, 128);
    write_potential(dir + "/u0", u);
    const PotentialField v = read_potential(dir + "/u0.bin");
    EXPECT_EQ(v.values, u.values);
    EXPECT_EQ(v.grid_x, u.grid_x);
    EXPECT_EQ(v.amplitude, u.amplitude);
    EXPECT_EQ(v.kind, u.kind);
}
