#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kpist/reconstruction.hpp"

namespace kpist {

struct PotentialSpec {
    std::string file;  // when set, the potential is read from disk
    std::string kind = "gaussian_dx";
    double amplitude = 0.05;
    double width = 2.0;
    double k0 = 1.0;
    double half_width = 32.0;
    int n_x = 256;
    int n_y = 256;
};

struct RaySpec {
    double xi = 0.0;
    double eta = 0.0;
};

struct ExperimentConfig {
    PotentialSpec potential;
    ScatteringSettings scattering;
    RHPSettings rhp;
    double delta = 0.05;
    std::vector<RaySpec> rays;
    double t_min = 10.0;
    double t_max = 100.0;
    int t_count = 12;
    int cluster = 5;          // micro-cluster size on oscillatory rays
    std::vector<ProbePoint> probes;  // RHP probes for the verify suite
    std::string scattering_dir;      // optional precomputed scattering data
    std::string output_dir;
};

ExperimentConfig config_from_json(const json& j, const std::string& base_dir = ".");
json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);
// Throws on delta <= 0, missing referenced files, or malformed ranges.
void validate_config(const ExperimentConfig& c);
PotentialField build_potential(const PotentialSpec& p);

struct SlopeFit {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
    int used = 0;
    int dropped = 0;
};

// Least squares on (log t, log v). With drop_transients, each of the two smallest-t points is
// dropped when its residual exceeds 2 sigma of the full fit.
SlopeFit fit_slope(const RVec& t, const RVec& v, bool drop_transients = true);

RVec log_spaced(double a, double b, int n);
// Micro-cluster offsets 2 pi / (16 |a|^{3/2} 3) apart, centered on t; one point when a >= -delta.
RVec cluster_times(double t, double a, double delta, int size);

struct DecayFit {
    RayCoordinates ray;
    RegionLabel region;
    RVec t_samples;
    RVec values;     // envelope of |u|
    RVec u1_values;  // envelope of |u1|
    RVec u2_values;  // envelope of |u2|
    SlopeFit fit;
    SlopeFit fit_u1;
    SlopeFit fit_u2;
    bool ok = true;
    std::string reason;
};

struct DecayCheck {
    bool pass = false;
    std::string description;
};

// Nonlinear targets: oscillatory slope -1 +- 0.15, transition -2/3 +- 0.15,
// rapid slope <= -1.1 or t|u| monotone decreasing.
DecayCheck check_decay_target(const DecayFit& f);
// Linear targets: oscillatory -1 +- 0.1, transition -2/3 +- 0.1, rapid |v(t_max)|/|v(t_min)| <= 1e-3.
DecayCheck check_linear_target(const DecayFit& f);

struct DecayRow {
    int ray = 0;
    int sample = 0;
    int member = 0;
    ReconstructionSample s;
};

struct DecayRun {
    std::vector<DecayFit> fits;
    std::vector<DecayRow> rows;
};

DecayRun run_decay_fit(const ExperimentConfig& c, const ScatteringData& data);
DecayRun run_linear_baseline(const ExperimentConfig& c, const ScatteringData& linear_data);

std::string decay_rows_csv(const DecayRun& r);
json decay_summary_json(const DecayRun& r, bool linear);

struct BoundCheck {
    std::string name;
    double measured = 0.0;
    double permitted = 0.0;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<BoundCheck> checks;
    bool pass = true;
    json to_json() const;
};

struct LemmaRow {
    int lemma = 1;
    double a = 0.0;
    double t = 0.0;
    double sup_ratio = 0.0;
    double xi_at_sup = 0.0;
    double k_lower_at_sup = 0.0;
};

struct LemmaGrid {
    RVec times{10.0, 40.0, 160.0};
    RVec k_lower{-5.0, 0.0, 5.0};
    double xi_min = -10.0;
    double xi_max = 10.0;
    double xi_step = 0.25;
    double a1 = -1.0;
    RVec a2{-0.05, 0.0, 0.05};
};

// Nondegenerate regime: sup |H| / (t^{-1/2}(1+|xi|)); degenerate regime: sup |H| t^{1/3}.
// The degenerate check takes the sup jointly over a, xi and k_lower.
std::vector<LemmaRow> airy_lemma_table(const LemmaGrid& g = {});
std::vector<BoundCheck> check_lemma_table(const std::vector<LemmaRow>& rows);
std::string lemma_table_csv(const std::vector<LemmaRow>& rows);

VerifyReport run_verify_suite(const ExperimentConfig& c, bool include_airy = true);

std::string samples_csv(const std::vector<ReconstructionSample>& s);
// Text probe lists: one "t x y" triple per line (commas or blanks), '#' comments; or JSON {"probes": [[t,x,y],...]}.
std::vector<ProbePoint> read_probes(const std::string& path);

}  // namespace kpist
