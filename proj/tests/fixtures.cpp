#include "fixtures.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>

#include "kpist/fft.hpp"

namespace kpist::fixtures {

namespace {

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

constexpr double kPi = std::numbers::pi;

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<cplx(double)>& f, double a, double b, cplx& kr, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx g = fc * kWg[3];
    kr = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const cplx s = f(c - h * kXgk[j]) + f(c + h * kXgk[j]);
        kr += kWgk[j] * s;
        if (j % 2 == 1) g += kWg[j / 2] * s;
    }
    kr *= h;
    g *= h;
    err = std::abs(kr - g);
}

cplx adapt(const std::function<cplx(double)>& f, double a, double b, double tol, int depth) {
    cplx v;
    double err;
    gk15(f, a, b, v, err);
    if (err <= tol || err <= 1e-14 * std::abs(v) || depth <= 0) return v;
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace

Grid1D reference_grid(int n) { return Grid1D::symmetric(32.0, n); }

PotentialField reference_potential(double eps, int n) {
    const Grid1D g = reference_grid(n);
    return make_test_potential(PotentialKind::gaussian_dx, eps, 2.0, g, g);
}

PotentialField small_box_potential(double eps, int n) {
    const Grid1D g = Grid1D::symmetric(16.0, n);
    return make_test_potential(PotentialKind::gaussian_dx, eps, 2.0, g, g);
}

PotentialField zero_potential(int n) {
    const Grid1D g = Grid1D::symmetric(8.0, n);
    return make_test_potential(PotentialKind::gaussian_dx, 0.0, 1.0, g, g);
}

const ScatteringRun& reference_run(double eps, int n_k) {
    static std::map<std::pair<double, int>, std::unique_ptr<ScatteringRun>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto& slot = cache[{eps, n_k}];
    if (!slot) {
        ScatteringSettings s;
        s.n_k = n_k;
        slot = std::make_unique<ScatteringRun>(compute_scattering(reference_potential(eps), s));
    }
    return *slot;
}

const ScatteringData& reference_data(double eps, int n_k) {
    static std::map<std::pair<double, int>, std::unique_ptr<ScatteringData>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto& slot = cache[{eps, n_k}];
    if (!slot) {
        ScatteringSettings s;
        s.n_k = n_k;
        slot = std::make_unique<ScatteringData>(scatter(reference_potential(eps), s));
    }
    return *slot;
}

const ScatteringData& zero_data() {
    static const ScatteringData d = scatter(zero_potential());
    return d;
}

const EvolveResult& reference_evolution(double eps, double t) {
    static std::map<std::pair<double, double>, std::unique_ptr<EvolveResult>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto& slot = cache[{eps, t}];
    if (!slot) slot = std::make_unique<EvolveResult>(evolve(reference_potential(eps), t, 0.0));
    return *slot;
}

cplx adaptive_integral(const std::function<cplx(double)>& f, double a, double b, double tol, int max_depth) {
    return adapt(f, a, b, tol, max_depth);
}

cplx open_cubic_phase(double a, double t, double xi) {
    // k = r - i c through the saddle (or a fixed shift when the saddles are real).
    const double beta = xi + 12.0 * t * a;
    const double c = beta > 0 ? std::sqrt(beta / (12.0 * t)) : std::min(std::cbrt(1.0 / (12.0 * t)), 2.0 / std::max(1e-300, -beta));
    const cplx I(0.0, 1.0);
    auto f = [&](double r) {
        const cplx k(r, -c);
        return std::exp(-I * (beta * k + 4.0 * t * k * k * k));
    };
    const double peak = -beta * c + 4.0 * t * c * c * c;
    const double R = std::sqrt(60.0 / (12.0 * t * c)) + 1.0;
    const double scale = std::exp(peak);
    cplx s = 0.0;
    const int pieces = 64;
    for (int p = 0; p < pieces; ++p) {
        const double lo = -R + 2.0 * R * p / pieces, hi = -R + 2.0 * R * (p + 1) / pieces;
        s += adaptive_integral(f, lo, hi, 1e-15 * scale * R / pieces);
    }
    return s / std::sqrt(2.0 * kPi);
}

cplx open_half_airy(double t, double a, double xi, double k_lower) {
    const cplx I(0.0, 1.0);
    auto F = [&](cplx l) { return I * (-xi * l + t * (12.0 * a * l + 4.0 * l * l * l)); };
    // Real segment [k_lower, L], then the ray L + s e^{i pi/6} where every term decays.
    const double L = std::max(k_lower, std::sqrt(std::max(0.0, xi / (12.0 * t) - a)) + 1.0);
    cplx total = 0.0;
    if (L > k_lower) {
        const double rate = std::abs(-xi + 12.0 * t * (a + std::max(L * L, k_lower * k_lower)));
        const int pieces = std::max(8, static_cast<int>((L - k_lower) * rate / 2.0));
        auto f = [&](double l) { return std::exp(F(cplx(l, 0.0))); };
        for (int p = 0; p < pieces; ++p) {
            const double lo = k_lower + (L - k_lower) * p / pieces, hi = k_lower + (L - k_lower) * (p + 1) / pieces;
            total += adaptive_integral(f, lo, hi, 1e-14 / pieces);
        }
    }
    const cplx dir = std::polar(1.0, kPi / 6.0);
    double S = 1.0;
    while (std::abs(std::exp(F(L + S * dir))) > 1e-30) S *= 1.5;
    auto g = [&](double s) { return std::exp(F(L + s * dir)) * dir; };
    const int pieces = 64;
    for (int p = 0; p < pieces; ++p) total += adaptive_integral(g, S * p / pieces, S * (p + 1) / pieces, 1e-15);
    return total;
}

double airy_maclaurin(double xd) {
    const long double x = xd, x3 = x * x * x;
    const long double c1 = 1.0L / (std::pow(3.0L, 2.0L / 3.0L) * std::tgamma(2.0L / 3.0L));
    const long double c2 = 1.0L / (std::pow(3.0L, 1.0L / 3.0L) * std::tgamma(1.0L / 3.0L));
    long double f = 0, g = 0;
    long double tf = 1, tg = x;
    for (int k = 0; k < 200; ++k) {
        f += tf;
        g += tg;
        tf *= x3 / ((3.0L * k + 2) * (3.0L * k + 3));
        tg *= x3 / ((3.0L * k + 3) * (3.0L * k + 4));
    }
    return static_cast<double>(c1 * f - c2 * g);
}

double rel_l2(const CVec& a, const CVec& b) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

double max_abs(const CVec& v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

CVec random_band_limited(int n, unsigned seed, int band) {
    if (band <= 0) band = n / 4;
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    CVec coeffs(n, 0.0);
    for (int m = -band; m <= band; ++m) coeffs[(m + n) % n] = cplx(nd(rng), nd(rng));
    fft_inverse(coeffs);
    for (auto& z : coeffs) z /= std::sqrt(static_cast<double>(n));
    return coeffs;
}

std::string temp_dir(const std::string& tag) {
    const auto p = std::filesystem::temp_directory_path() / ("kpist_test_" + tag);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p.string();
}

}  // namespace kpist::fixtures
