#include "kpist/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kpist/airy.hpp"
#include "kpist/parallel.hpp"

namespace kpist {

namespace {

std::string resolve(const std::string& p, const std::string& base) {
    if (p.empty()) return p;
    std::filesystem::path q(p);
    if (q.is_absolute()) return p;
    return (std::filesystem::path(base) / q).lexically_normal().string();
}

std::vector<ProbePoint> default_probes() {
    return {{0.0, 0.0, 0.0}, {0.0, 2.0, 1.0}, {10.0, -30.0, 0.0}, {10.0, 0.0, 0.0}, {50.0, 150.0, 0.0}};
}

double envelope_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

std::string probe_tag(const ProbePoint& p) {
    return "(t=" + fmt_double(p.t) + ",x=" + fmt_double(p.x) + ",y=" + fmt_double(p.y) + ")";
}

BoundCheck le_check(const std::string& name, double measured, double permitted, const std::string& detail = "") {
    return BoundCheck{name, measured, permitted, measured <= permitted, detail};
}

}  // namespace

ExperimentConfig config_from_json(const json& j, const std::string& base_dir) {
    ExperimentConfig c;
    if (j.contains("potential")) {
        const json& p = j.at("potential");
        c.potential.file = resolve(p.value("file", std::string()), base_dir);
        c.potential.kind = p.value("kind", c.potential.kind);
        c.potential.amplitude = p.value("amplitude", c.potential.amplitude);
        c.potential.width = p.value("width", c.potential.width);
        c.potential.k0 = p.value("k0", c.potential.k0);
        c.potential.half_width = p.value("half_width", c.potential.half_width);
        c.potential.n_x = p.value("n_x", c.potential.n_x);
        c.potential.n_y = p.value("n_y", c.potential.n_y);
    }
    if (j.contains("scattering")) {
        const json& s = j.at("scattering");
        c.scattering.n_k = s.value("n_k", c.scattering.n_k);
        c.scattering.tol = s.value("tol", c.scattering.tol);
        c.scattering.max_iter = s.value("max_iter", c.scattering.max_iter);
        c.scattering.y_cutoff = s.value("y_cutoff", c.scattering.y_cutoff);
    }
    if (j.contains("rhp")) {
        c.rhp.tol = j.at("rhp").value("tol", c.rhp.tol);
        c.rhp.max_iter = j.at("rhp").value("max_iter", c.rhp.max_iter);
    }
    c.delta = j.value("delta", c.delta);
    if (j.contains("rays"))
        for (const auto& r : j.at("rays")) c.rays.push_back({r.at("xi").get<double>(), r.value("eta", 0.0)});
    if (j.contains("t_range")) {
        const json& t = j.at("t_range");
        c.t_min = t.value("min", c.t_min);
        c.t_max = t.value("max", c.t_max);
        c.t_count = t.value("count", c.t_count);
    }
    c.cluster = j.value("cluster", c.cluster);
    if (j.contains("probes"))
        for (const auto& p : j.at("probes")) c.probes.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
    c.scattering_dir = resolve(j.value("scattering_dir", std::string()), base_dir);
    c.output_dir = resolve(j.value("output_dir", std::string()), base_dir);
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json rays = json::array(), probes = json::array();
    for (const auto& r : c.rays) rays.push_back({{"xi", r.xi}, {"eta", r.eta}});
    for (const auto& p : c.probes) probes.push_back({p.t, p.x, p.y});
    return json{{"potential",
                 {{"file", c.potential.file},
                  {"kind", c.potential.kind},
                  {"amplitude", c.potential.amplitude},
                  {"width", c.potential.width},
                  {"k0", c.potential.k0},
                  {"half_width", c.potential.half_width},
                  {"n_x", c.potential.n_x},
                  {"n_y", c.potential.n_y}}},
                {"scattering",
                 {{"n_k", c.scattering.n_k},
                  {"tol", c.scattering.tol},
                  {"max_iter", c.scattering.max_iter},
                  {"y_cutoff", c.scattering.y_cutoff}}},
                {"rhp", {{"tol", c.rhp.tol}, {"max_iter", c.rhp.max_iter}}},
                {"delta", c.delta},
                {"rays", rays},
                {"t_range", {{"min", c.t_min}, {"max", c.t_max}, {"count", c.t_count}}},
                {"cluster", c.cluster},
                {"probes", probes},
                {"scattering_dir", c.scattering_dir},
                {"output_dir", c.output_dir}};
}

ExperimentConfig load_config(const std::string& path) {
    const std::string base = std::filesystem::path(path).parent_path().string();
    ExperimentConfig c = config_from_json(read_json(path), base.empty() ? "." : base);
    validate_config(c);
    return c;
}

void validate_config(const ExperimentConfig& c) {
    if (!(c.delta > 0)) throw std::invalid_argument("config: delta must be positive");
    if (!(c.t_min > 0) || !(c.t_max > c.t_min) || c.t_count < 6)
        throw std::invalid_argument("config: t_range needs 0 < min < max and at least 6 samples");
    if (c.cluster < 1) throw std::invalid_argument("config: cluster must be at least 1");
    if (!c.potential.file.empty()) {
        const std::string base = strip_extension(c.potential.file);
        if (!std::filesystem::exists(base + ".bin") || !std::filesystem::exists(base + ".json"))
            throw std::invalid_argument("config: potential file not found: " + c.potential.file);
    }
    if (!c.scattering_dir.empty() && !std::filesystem::exists(c.scattering_dir + "/meta.json"))
        throw std::invalid_argument("config: scattering data not found in " + c.scattering_dir);
}

PotentialField build_potential(const PotentialSpec& p) {
    if (!p.file.empty()) return read_potential(p.file);
    const Grid1D gx = Grid1D::symmetric(p.half_width, p.n_x), gy = Grid1D::symmetric(p.half_width, p.n_y);
    return make_test_potential(potential_kind_from_string(p.kind), p.amplitude, p.width, gx, gy, p.k0);
}

SlopeFit fit_slope(const RVec& t, const RVec& v, bool drop_transients) {
    if (t.size() != v.size() || t.size() < 3) throw std::invalid_argument("fit_slope: need at least 3 matched samples");
    for (size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0) || !(v[i] > 0) || !std::isfinite(v[i]))
            throw std::invalid_argument("fit_slope: samples must be positive and finite");
        if (i > 0 && !(t[i] > t[i - 1])) throw std::invalid_argument("fit_slope: t must be strictly increasing");
    }
    auto fit = [&](const std::vector<size_t>& idx, RVec* resid) {
        double mx = 0, my = 0;
        for (size_t i : idx) {
            mx += std::log(t[i]);
            my += std::log(v[i]);
        }
        mx /= idx.size();
        my /= idx.size();
        double sxx = 0, sxy = 0;
        for (size_t i : idx) {
            const double dx = std::log(t[i]) - mx;
            sxx += dx * dx;
            sxy += dx * (std::log(v[i]) - my);
        }
        SlopeFit f;
        f.slope = sxy / sxx;
        f.intercept = my - f.slope * mx;
        double ss = 0;
        if (resid) resid->assign(t.size(), 0.0);
        for (size_t i : idx) {
            const double r = std::log(v[i]) - (f.intercept + f.slope * std::log(t[i]));
            ss += r * r;
            if (resid) (*resid)[i] = r;
        }
        const double sigma = idx.size() > 2 ? std::sqrt(ss / (idx.size() - 2)) : 0.0;
        f.slope_stderr = sigma / std::sqrt(sxx);
        f.used = static_cast<int>(idx.size());
        return std::make_pair(f, sigma);
    };
    std::vector<size_t> all(t.size());
    for (size_t i = 0; i < t.size(); ++i) all[i] = i;
    RVec resid;
    auto [f, sigma] = fit(all, &resid);
    if (!drop_transients || t.size() < 5) return f;
    std::vector<size_t> keep;
    int dropped = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (i < 2 && std::abs(resid[i]) > 2.0 * sigma) {
            ++dropped;
            continue;
        }
        keep.push_back(i);
    }
    if (dropped == 0) return f;
    SlopeFit g = fit(keep, nullptr).first;
    g.dropped = dropped;
    return g;
}

RVec log_spaced(double a, double b, int n) {
    RVec t(n);
    for (int i = 0; i < n; ++i) t[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
    t.front() = a;
    t.back() = b;
    return t;
}

RVec cluster_times(double t, double a, double delta, int size) {
    if (a >= -delta || size <= 1) return {t};
    const double h = 2.0 * std::numbers::pi / (16.0 * std::pow(std::abs(a), 1.5) * 3.0);
    RVec out(size);
    for (int m = 0; m < size; ++m) out[m] = t + (m - 0.5 * (size - 1)) * h;
    return out;
}

DecayCheck check_decay_target(const DecayFit& f) {
    std::ostringstream os;
    if (!f.ok) return {false, "ray aborted: " + f.reason};
    os << "slope " << f.fit.slope << " +- " << f.fit.slope_stderr;
    switch (f.region.label) {
        case Region::oscillatory:
            os << ", target -1 +- 0.15";
            return {std::abs(f.fit.slope + 1.0) <= 0.15, os.str()};
        case Region::transition:
            os << ", target -0.667 +- 0.15";
            return {std::abs(f.fit.slope + 2.0 / 3.0) <= 0.15, os.str()};
        case Region::rapid_decay: {
            bool mono = true;
            for (size_t i = 1; i < f.values.size(); ++i)
                if (!(f.t_samples[i] * f.values[i] < f.t_samples[i - 1] * f.values[i - 1])) mono = false;
            os << ", target <= -1.1 or t|u| decreasing (" << (mono ? "decreasing" : "not decreasing") << ")";
            return {f.fit.slope <= -1.1 || mono, os.str()};
        }
    }
    return {false, "unknown region"};
}

DecayCheck check_linear_target(const DecayFit& f) {
    std::ostringstream os;
    if (!f.ok) return {false, "ray aborted: " + f.reason};
    switch (f.region.label) {
        case Region::oscillatory:
            os << "slope " << f.fit.slope << ", target -1 +- 0.1";
            return {std::abs(f.fit.slope + 1.0) <= 0.1, os.str()};
        case Region::transition:
            os << "slope " << f.fit.slope << ", target -0.667 +- 0.1";
            return {std::abs(f.fit.slope + 2.0 / 3.0) <= 0.1, os.str()};
        case Region::rapid_decay: {
            const double r = f.values.back() / f.values.front();
            os << "|v(t_max)|/|v(t_min)| = " << r << ", target <= 1e-3";
            return {r <= 1e-3, os.str()};
        }
    }
    return {false, "unknown region"};
}

namespace {

struct TaskOut {
    std::vector<ReconstructionSample> members;
    std::string error;
};

DecayRun run_rays(const ExperimentConfig& c, const ScatteringData& data, bool linear) {
    validate_config(c);
    const RVec ts = log_spaced(c.t_min, c.t_max, c.t_count);
    const int nr = static_cast<int>(c.rays.size()), nt = c.t_count;
    std::vector<TaskOut> tasks(static_cast<size_t>(nr) * nt);
    ReconstructSettings rs;
    rs.rhp = c.rhp;
    rs.delta = c.delta;
    parallel_for(nr * nt, [&](int task) {
        const int ir = task / nt, it = task % nt;
        const RaySpec& ray = c.rays[ir];
        const RayCoordinates rc = ray_coordinates(ray.xi, ray.eta);
        TaskOut& out = tasks[task];
        try {
            RHPSolution warm;
            for (double t : cluster_times(ts[it], rc.a, c.delta, c.cluster)) {
                const ProbePoint p{t, ray.xi * t, ray.eta * t};
                ReconstructionSample s;
                if (linear) {
                    s.point = p;
                    s.ray = rc;
                    s.region = classify(ray.xi, ray.eta, c.delta);
                    s.u1 = linear_kp_kl(data, t, p.x, p.y);
                    s.u = s.u1;
                } else {
                    s = reconstruct(data, p, rs, &warm);
                }
                out.members.push_back(s);
            }
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    });
    DecayRun run;
    for (int ir = 0; ir < nr; ++ir) {
        DecayFit f;
        f.ray = ray_coordinates(c.rays[ir].xi, c.rays[ir].eta);
        f.region = classify(f.ray.xi, f.ray.eta, c.delta);
        for (int it = 0; it < nt; ++it) {
            const TaskOut& o = tasks[static_cast<size_t>(ir) * nt + it];
            if (!o.error.empty() && f.ok) {
                f.ok = false;
                f.reason = "t=" + fmt_double(ts[it]) + ": " + o.error;
            }
            std::vector<cplx> u, u1, u2;
            for (size_t m = 0; m < o.members.size(); ++m) {
                u.push_back(o.members[m].u);
                u1.push_back(o.members[m].u1);
                u2.push_back(o.members[m].u2);
                run.rows.push_back({ir, it, static_cast<int>(m), o.members[m]});
            }
            f.t_samples.push_back(ts[it]);
            f.values.push_back(envelope_abs(u));
            f.u1_values.push_back(envelope_abs(u1));
            f.u2_values.push_back(envelope_abs(u2));
        }
        if (f.ok) {
            try {
                f.fit = fit_slope(f.t_samples, f.values);
                f.fit_u1 = fit_slope(f.t_samples, f.u1_values);
                if (!linear) f.fit_u2 = fit_slope(f.t_samples, f.u2_values);
            } catch (const std::exception& e) {
                f.ok = false;
                f.reason = e.what();
            }
        }
        run.fits.push_back(f);
    }
    return run;
}

}  // namespace

DecayRun run_decay_fit(const ExperimentConfig& c, const ScatteringData& data) { return run_rays(c, data, false); }
DecayRun run_linear_baseline(const ExperimentConfig& c, const ScatteringData& lin) { return run_rays(c, lin, true); }

std::string decay_rows_csv(const DecayRun& r) {
    std::ostringstream os;
    os << "ray,sample,member,t,x,y,xi,eta,a,region,re_u1,im_u1,re_u2,im_u2,re_u,im_u,abs_u\n";
    for (const auto& row : r.rows) {
        const auto& s = row.s;
        os << row.ray << ',' << row.sample << ',' << row.member << ',' << fmt_double(s.point.t) << ','
           << fmt_double(s.point.x) << ',' << fmt_double(s.point.y) << ',' << fmt_double(s.ray.xi) << ','
           << fmt_double(s.ray.eta) << ',' << fmt_double(s.ray.a) << ',' << to_string(s.region.label) << ','
           << fmt_double(s.u1.real()) << ',' << fmt_double(s.u1.imag()) << ',' << fmt_double(s.u2.real()) << ','
           << fmt_double(s.u2.imag()) << ',' << fmt_double(s.u.real()) << ',' << fmt_double(s.u.imag()) << ','
           << fmt_double(std::abs(s.u)) << '\n';
    }
    return os.str();
}

json decay_summary_json(const DecayRun& r, bool linear) {
    json rays = json::array();
    bool all = true;
    for (const auto& f : r.fits) {
        const DecayCheck chk = linear ? check_linear_target(f) : check_decay_target(f);
        all = all && chk.pass;
        auto fitj = [](const SlopeFit& s) {
            return json{{"slope", s.slope}, {"slope_stderr", s.slope_stderr}, {"used", s.used}, {"dropped", s.dropped}};
        };
        json j{{"xi", f.ray.xi},
               {"eta", f.ray.eta},
               {"a", f.ray.a},
               {"region", to_string(f.region.label)},
               {"delta", f.region.delta},
               {"ok", f.ok},
               {"reason", f.reason},
               {"t", f.t_samples},
               {"abs_u", f.values},
               {"fit_u", fitj(f.fit)},
               {"fit_u1", fitj(f.fit_u1)},
               {"pass", chk.pass},
               {"check", chk.description}};
        if (!linear) {
            j["abs_u2"] = f.u2_values;
            j["fit_u2"] = fitj(f.fit_u2);
        }
        rays.push_back(j);
    }
    return json{{"linear", linear}, {"rays", rays}, {"pass", all}};
}

json VerifyReport::to_json() const {
    json arr = json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name}, {"measured", c.measured}, {"permitted", c.permitted}, {"pass", c.pass}, {"detail", c.detail}});
    return json{{"checks", arr}, {"pass", pass}};
}

std::vector<LemmaRow> airy_lemma_table(const LemmaGrid& g) {
    struct Case {
        int lemma;
        double a, t;
    };
    std::vector<Case> cases;
    for (double t : g.times) cases.push_back({1, g.a1, t});
    for (double a : g.a2)
        for (double t : g.times) cases.push_back({2, a, t});
    const int nxi = static_cast<int>(std::floor((g.xi_max - g.xi_min) / g.xi_step + 1e-9)) + 1;
    const int nk = static_cast<int>(g.k_lower.size());
    const int per = nxi * nk;
    RVec vals(cases.size() * per);
    parallel_for(static_cast<int>(vals.size()), [&](int idx) {
        const Case& cs = cases[idx / per];
        const int r = idx % per;
        const double xi = g.xi_min + (r / nk) * g.xi_step, kl = g.k_lower[r % nk];
        vals[idx] = std::abs(half_airy_H(cs.t, cs.a, xi, kl));
    });
    std::vector<LemmaRow> rows;
    for (size_t c = 0; c < cases.size(); ++c) {
        LemmaRow row{cases[c].lemma, cases[c].a, cases[c].t, -1.0, 0.0, 0.0};
        for (int r = 0; r < per; ++r) {
            const double xi = g.xi_min + (r / nk) * g.xi_step, kl = g.k_lower[r % nk];
            const double h = vals[c * per + r];
            const double ratio = cases[c].lemma == 1 ? h / (std::pow(cases[c].t, -0.5) * (1.0 + std::abs(xi)))
                                                     : h * std::cbrt(cases[c].t);
            if (ratio > row.sup_ratio) {
                row.sup_ratio = ratio;
                row.xi_at_sup = xi;
                row.k_lower_at_sup = kl;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<BoundCheck> check_lemma_table(const std::vector<LemmaRow>& rows) {
    std::vector<BoundCheck> out;
    std::vector<const LemmaRow*> l1;
    for (const auto& r : rows)
        if (r.lemma == 1) l1.push_back(&r);
    for (size_t i = 1; i < l1.size(); ++i)
        out.push_back(le_check("airy.nondegenerate.ratio(t=" + fmt_double(l1[i]->t) + ")", l1[i]->sup_ratio, 1.15 * l1[i - 1]->sup_ratio,
                               "sup|H|/(t^-1/2 (1+|xi|)) non-increasing within 15%, a=" + fmt_double(l1[i]->a)));
    std::vector<double> ts;
    for (const auto& r : rows)
        if (r.lemma == 2 && std::find(ts.begin(), ts.end(), r.t) == ts.end()) ts.push_back(r.t);
    RVec sup(ts.size(), 0.0);
    for (const auto& r : rows)
        if (r.lemma == 2) {
            const size_t i = std::find(ts.begin(), ts.end(), r.t) - ts.begin();
            sup[i] = std::max(sup[i], r.sup_ratio);
        }
    for (size_t i = 1; i < ts.size(); ++i)
        out.push_back(le_check("airy.degenerate.stability(t=" + fmt_double(ts[i]) + ")", std::abs(sup[i] / sup[0] - 1.0), 0.15,
                               "|r(t)/r(" + fmt_double(ts[0]) + ") - 1| for r = sup over a, xi, k of |H| t^1/3"));
    return out;
}

std::string lemma_table_csv(const std::vector<LemmaRow>& rows) {
    std::ostringstream os;
    os << "regime,a,t,sup_ratio,xi_at_sup,k_lower_at_sup\n";
    for (const auto& r : rows)
        os << (r.lemma == 1 ? "nondegenerate" : "degenerate") << ',' << fmt_double(r.a) << ',' << fmt_double(r.t) << ','
           << fmt_double(r.sup_ratio) << ',' << fmt_double(r.xi_at_sup) << ',' << fmt_double(r.k_lower_at_sup) << '\n';
    return os.str();
}

VerifyReport run_verify_suite(const ExperimentConfig& c, bool include_airy) {
    VerifyReport rep;
    const PotentialField u = build_potential(c.potential);
    const ConditionsReport cond = check_conditions(u);
    const double cc = cond.c, w = cond.w_norm;
    rep.checks.push_back(BoundCheck{"conditions", w, (1.0 - cc) / 4.0, cond.pass,
                                    "c=" + fmt_double(cc) + " c_tilde=" + fmt_double(cond.c_tilde) + " " + cond.diagnostic});
    if (!cond.pass) {
        rep.checks.push_back(BoundCheck{"CT.contraction", std::numeric_limits<double>::quiet_NaN(), 0.5, false,
                                        "small-data conditions fail; solve_mul not attempted"});
        rep.pass = false;
        return rep;
    }
    const ScatteringRun run = compute_scattering(u, c.scattering);
    const double pi = std::numbers::pi;
    const int n = run.ut.grid_l.n, ny = run.ut.yw.count;
    const double d = run.ut.grid_l.spacing();
    for (const MuSharpField* mu : {&run.mu_plus, &run.mu_minus}) {
        const std::string s = mu->sign == Sign::plus ? "+" : "-";
        const CVec gd = g_on_delta(mu->sign, run.ut);
        rep.checks.push_back(le_check("g_delta.x_bound[" + s + "]", x_norm(gd, n, ny, n, d, d), 1.05 * std::sqrt(pi) * w));
        rep.checks.push_back(
            le_check("mu_sharp.x_bound[" + s + "]", x_norm(mu->values, n, ny, n, d, d), 1.05 * std::sqrt(pi) * w / (1.0 - cc)));
        double r = 0.0;
        for (size_t i = 2; i < mu->ratio_history.size(); ++i) r = std::max(r, mu->ratio_history[i]);
        rep.checks.push_back(le_check("neumann.ratio[" + s + "]", r, cc + 0.05, "observed contraction after the third step"));
    }
    const ScatteringData& sd = run.data;
    rep.checks.push_back(le_check("T.l2_bound[+]", l2_norm_kl(sd.T_plus, sd.grid_k, sd.grid_l), 1.05 * w / (1.0 - cc)));
    rep.checks.push_back(le_check("T.l2_bound[-]", l2_norm_kl(sd.T_minus, sd.grid_k, sd.grid_l), 1.05 * w / (1.0 - cc)));
    const std::vector<ProbePoint> probes = c.probes.empty() ? default_probes() : c.probes;
    std::vector<std::vector<BoundCheck>> per(probes.size());
    parallel_for(static_cast<int>(probes.size()), [&](int i) {
        const ProbePoint& p = probes[i];
        const std::string tag = probe_tag(p);
        const RHPOperator op(sd, p);
        const double nrm = op.ct_norm_estimate(10);
        auto& out = per[i];
        out.push_back(le_check("CT.contraction" + tag, nrm, 0.5, "power iteration, 10 steps; strict < 0.5"));
        out.back().pass = nrm < 0.5;
        out.push_back(le_check("CT.norm_bound" + tag, nrm, 1.05 * 2.0 * w / (1.0 - cc)));
        if (!(nrm < 0.5)) return;
        RHPSolution sol = solve_mul(op, c.rhp);
        solve_dmul_dx(op, sol, c.rhp);
        const double dk = op.weights().dk;
        out.push_back(le_check("mu.l2_bound" + tag, grid_l2(sol.mu_minus_1, dk), 1.05 * 2.0 * sol.ct1_norm));
        const double bound = 2.0 * sol.ctx1_norm + 4.0 * op.hs_norm_Tx() * sol.ct1_norm;
        out.push_back(le_check("dmu_dx.l2_bound" + tag, grid_l2(sol.dmu_dx, dk), 1.1 * bound,
                               "operator norm replaced by the Hilbert-Schmidt bound"));
        double r = 0.0;
        for (double v : sol.ratio_history) r = std::max(r, v);
        out.push_back(le_check("rhp.ratio" + tag, r, 0.55));
        out.push_back(le_check("rhp.residual" + tag, std::max(sol.residual_mu, sol.residual_dmu), c.rhp.tol));
    });
    for (auto& v : per) rep.checks.insert(rep.checks.end(), v.begin(), v.end());
    if (include_airy) {
        const auto rows = airy_lemma_table();
        for (auto& b : check_lemma_table(rows)) rep.checks.push_back(b);
    }
    for (const auto& b : rep.checks) rep.pass = rep.pass && b.pass;
    return rep;
}

std::string samples_csv(const std::vector<ReconstructionSample>& v) {
    std::ostringstream os;
    os << "t,x,y,xi,eta,a,region,re_u1,im_u1,re_u2,im_u2,re_u,im_u\n";
    for (const auto& s : v)
        os << fmt_double(s.point.t) << ',' << fmt_double(s.point.x) << ',' << fmt_double(s.point.y) << ','
           << fmt_double(s.ray.xi) << ',' << fmt_double(s.ray.eta) << ',' << fmt_double(s.ray.a) << ','
           << to_string(s.region.label) << ',' << fmt_double(s.u1.real()) << ',' << fmt_double(s.u1.imag()) << ','
           << fmt_double(s.u2.real()) << ',' << fmt_double(s.u2.imag()) << ',' << fmt_double(s.u.real()) << ','
           << fmt_double(s.u.imag()) << '\n';
    return os.str();
}

std::vector<ProbePoint> read_probes(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_probes: cannot open " + path);
    std::vector<ProbePoint> out;
    if (std::filesystem::path(path).extension() == ".json") {
        json j;
        is >> j;
        for (const auto& p : j.at("probes")) out.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
        return out;
    }
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double v[3];
        int got = 0;
        while (got < 3 && ls >> v[got]) ++got;
        if (got == 0 && ls.eof()) continue;
        std::string rest;
        if (got != 3 || (ls >> rest))
            throw std::invalid_argument("read_probes: line " + std::to_string(lineno) + " is not a 't x y' triple");
        out.push_back({v[0], v[1], v[2]});
    }
    return out;
}

}  // namespace kpist
