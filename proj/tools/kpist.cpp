// kpist: command-line front end for the KP-I inverse-scattering toolkit.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kpist/harness.hpp"
#include "kpist/oracle.hpp"
#include "kpist/parallel.hpp"

using namespace kpist;

namespace {

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << text;
}

ScatteringData load_or_compute(const ExperimentConfig& c) {
    if (!c.scattering_dir.empty()) return read_scattering(c.scattering_dir);
    return scatter(build_potential(c.potential), c.scattering);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"KP-I inverse-scattering toolkit"};
    app.require_subcommand(1);

    // make-potential
    auto* mk = app.add_subcommand("make-potential", "Write a test potential (<base>.bin + <base>.json)");
    std::string mk_kind = "gaussian_dx", mk_out;
    double mk_amp = 0.05, mk_width = 2.0, mk_k0 = 1.0, mk_half = 32.0;
    int mk_n = 256;
    mk->add_option("--kind", mk_kind, "gaussian_dx or cosine_packet");
    mk->add_option("--amplitude", mk_amp);
    mk->add_option("--width", mk_width);
    mk->add_option("--k0", mk_k0);
    mk->add_option("--half-width", mk_half);
    mk->add_option("--n", mk_n, "points per axis");
    mk->add_option("-o,--output", mk_out)->required();

    // scatter
    auto* sc = app.add_subcommand("scatter", "Direct scattering map: potential -> T+-");
    std::string sc_in, sc_out;
    ScatteringSettings sc_set;
    sc->add_option("potential", sc_in)->required();
    sc->add_option("-o,--output", sc_out)->required();
    sc->add_option("--n-k", sc_set.n_k);
    sc->add_option("--tol", sc_set.tol);
    sc->add_option("--max-iter", sc_set.max_iter);

    // reconstruct
    auto* rc = app.add_subcommand("reconstruct", "Evaluate u = u1 + u2 at probe points");
    std::string rc_data, rc_probes, rc_out;
    ReconstructSettings rc_set;
    rc->add_option("data", rc_data)->required();
    rc->add_option("--probes", rc_probes)->required();
    rc->add_option("-o,--output", rc_out, "CSV path (default stdout)");
    rc->add_option("--delta", rc_set.delta);
    rc->add_option("--tol", rc_set.rhp.tol);

    // rhp-solve
    auto* rh = app.add_subcommand("rhp-solve", "Solve the nonlocal RHP at probe points");
    std::string rh_data, rh_probes, rh_out;
    RHPSettings rh_set;
    rh->add_option("data", rh_data)->required();
    rh->add_option("--probes", rh_probes)->required();
    rh->add_option("-o,--output", rh_out)->required();
    rh->add_option("--tol", rh_set.tol);

    // decay-fit
    auto* df = app.add_subcommand("decay-fit", "Ray decay fits on t in [t_min, t_max]");
    std::string df_cfg, df_out;
    bool df_linear = false;
    df->add_option("config", df_cfg)->required();
    df->add_flag("--linear", df_linear, "fit the linear solution instead");
    df->add_option("-o,--output", df_out, "output directory (default: config output_dir)");

    // evolve-direct
    auto* ev = app.add_subcommand("evolve-direct", "Pseudospectral evolution of a potential");
    std::string ev_in, ev_out;
    double ev_t = 0.5, ev_dt = 0.0, ev_tol = 1e-6;
    ev->add_option("potential", ev_in)->required();
    ev->add_option("--t", ev_t);
    ev->add_option("--dt", ev_dt, "time step (default: 0.5/max|omega|)");
    ev->add_option("--drift-tol", ev_tol);
    ev->add_option("-o,--output", ev_out)->required();

    // verify
    auto* vf = app.add_subcommand("verify", "Bound verification suite; 'verify airy' emits the half-line Airy ratio tables");
    std::string vf_target, vf_out;
    bool vf_no_airy = false;
    vf->add_option("target", vf_target, "config file or 'airy'")->required();
    vf->add_option("-o,--output", vf_out, "output path (default stdout)");
    vf->add_flag("--no-airy", vf_no_airy, "skip the Airy ratio tables");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*mk) {
            const Grid1D g = Grid1D::symmetric(mk_half, mk_n);
            write_potential(mk_out, make_test_potential(potential_kind_from_string(mk_kind), mk_amp, mk_width, g, g, mk_k0));
            return 0;
        }
        if (*sc) {
            const ScatteringRun run = compute_scattering(read_potential(sc_in), sc_set);
            write_scattering(sc_out, run.data);
            std::cerr << "scatter: iterations " << run.mu_plus.iterations << "/" << run.mu_minus.iterations
                      << ", residual " << std::max(run.mu_plus.residual, run.mu_minus.residual) << "\n";
            return std::max(run.mu_plus.residual, run.mu_minus.residual) <= sc_set.tol ? 0 : 1;
        }
        if (*rc) {
            const ScatteringData d = read_scattering(rc_data);
            const auto samples = reconstruct_many(d, read_probes(rc_probes), rc_set);
            write_text(rc_out, samples_csv(samples));
            bool ok = true;
            for (const auto& s : samples) ok = ok && s.residual_mu <= rc_set.rhp.tol && s.residual_dmu <= rc_set.rhp.tol;
            return ok ? 0 : 1;
        }
        if (*rh) {
            const ScatteringData d = read_scattering(rh_data);
            const auto probes = read_probes(rh_probes);
            std::vector<RHPSolution> sols(probes.size());
            parallel_for(static_cast<int>(probes.size()), [&](int i) { sols[i] = solve_rhp(d, probes[i], rh_set); });
            write_rhp_solutions(rh_out, sols);
            bool ok = true;
            for (const auto& s : sols) ok = ok && s.residual_mu <= rh_set.tol && s.residual_dmu <= rh_set.tol;
            return ok ? 0 : 1;
        }
        if (*df) {
            ExperimentConfig c = load_config(df_cfg);
            if (!df_out.empty()) c.output_dir = df_out;
            DecayRun run;
            if (df_linear) {
                const PotentialField u = build_potential(c.potential);
                run = run_linear_baseline(c, linear_scattering_data(u, spectral_grid(u, c.scattering.n_k)));
            } else {
                run = run_decay_fit(c, load_or_compute(c));
            }
            const json summary = decay_summary_json(run, df_linear);
            if (c.output_dir.empty()) {
                std::cout << summary.dump(2) << "\n";
            } else {
                std::filesystem::create_directories(c.output_dir);
                const std::string stem = df_linear ? "/linear_" : "/decay_";
                write_text(c.output_dir + stem + "rows.csv", decay_rows_csv(run));
                write_json(c.output_dir + stem + "summary.json", summary);
            }
            return summary.at("pass").get<bool>() ? 0 : 1;
        }
        if (*ev) {
            const EvolveResult r = evolve(read_potential(ev_in), ev_t, ev_dt, ev_tol);
            write_potential(ev_out, r.field);
            std::string csv = "step,t,l2,relative_drift\n";
            for (size_t i = 0; i < r.times.size(); ++i)
                csv += std::to_string(i) + "," + fmt_double(r.times[i]) + "," + fmt_double(r.l2[i]) + "," +
                       fmt_double(r.l2[0] > 0 ? r.l2[i] / r.l2[0] - 1.0 : 0.0) + "\n";
            write_text(strip_extension(ev_out) + "_conservation.csv", csv);
            return 0;
        }
        if (*vf) {
            if (vf_target == "airy") {
                const auto rows = airy_lemma_table();
                write_text(vf_out, lemma_table_csv(rows));
                bool ok = true;
                for (const auto& b : check_lemma_table(rows)) {
                    ok = ok && b.pass;
                    std::cerr << (b.pass ? "pass " : "FAIL ") << b.name << " measured " << b.measured << " permitted "
                              << b.permitted << "\n";
                }
                return ok ? 0 : 1;
            }
            const VerifyReport rep = run_verify_suite(load_config(vf_target), !vf_no_airy);
            write_text(vf_out, rep.to_json().dump(2) + "\n");
            for (const auto& b : rep.checks)
                if (!b.pass) std::cerr << "FAIL " << b.name << " measured " << b.measured << " permitted " << b.permitted << "\n";
            return rep.pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "kpist: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
