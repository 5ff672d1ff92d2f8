#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "latprof/pivotlab.hpp"
#include "latprof/profile.hpp"
#include "latprof/sampler.hpp"
#include "latprof/stats.hpp"

namespace latprof {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::json;

struct ExperimentConfig {
    SamplerConfig sampler{6, 1000003ULL, 1ULL};
    double r_window = 3.0;
    std::int64_t trials = 1000;
    std::vector<double> volumes{1.0, 2.0, 4.0, 8.0};
    std::vector<double> thresholds{4.0, 8.0, 16.0, 32.0, 64.0};
    PivotParams pivot{8.0, 2.0, 1.0};
    long j_max = 5;
    double moment_p = 0.5;
    double truncation_a = 64.0;
    std::vector<int> n_list{5, 6, 7, 8, 9, 10};
    std::string output_path;
    // Scale invariance is re-verified exactly on every k-th trial.
    std::int64_t scale_check_every = 97;
    EnumerationBudget budget;

    Json to_json() const;
};

// Flat key = value text; '#' starts a comment.  Keys mirror the fields; see
// README for the list.
ExperimentConfig load_config_file(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct TailTable {
    std::vector<double> thresholds;
    std::vector<std::int64_t> exceed;
    std::int64_t trials_ok = 0;
    double envelope_constant = 0.0;  // fitted: sup_T T * p_hat

    double p_hat(std::size_t i) const;
    stats::Interval ci(std::size_t i) const;
    double envelope(std::size_t i) const;  // min(1, constant / T)
    void fit_constant();
    Json to_json() const;
    std::string to_csv() const;
};

struct SiegelRow {
    double v = 0.0;
    stats::MeanVar m;
    double var_over_v = 0.0;
    std::int64_t zero_count = 0;
};

struct SiegelReport {
    ExperimentConfig config;
    std::vector<SiegelRow> rows;
    std::int64_t trials_ok = 0;
    std::int64_t budget_failures = 0;
    double c_fit_empty = 0.0;   // sup_V V * P(M=0)
    double c_r_fit = 0.0;       // max Var/V over the volume grid
    double kendall_p_incr = 1.0;

    Json to_json() const;
    std::string csv() const;
};

SiegelReport siegel_rogers_check(const ExperimentConfig& cfg, int threads);

struct GammaTailReport {
    ExperimentConfig config;
    TailTable gamma_table;
    TailTable tau_table;
    std::int64_t trials_ok = 0;
    std::int64_t budget_failures = 0;
    std::int64_t uncertified = 0;
    std::int64_t scale_checks = 0;
    double sup_t_phat = 0.0;
    double kendall_p_incr = 1.0;  // trend of T * p_hat over thresholds >= 2

    Json to_json() const;
    std::vector<std::pair<std::string, std::string>> csv_tables() const;
};

GammaTailReport gamma_tail_experiment(const ExperimentConfig& cfg, int threads);

struct VLambdaRow {
    double s = 0.0;
    std::int64_t exceed = 0;
};

struct VLambdaReport {
    ExperimentConfig config;
    std::vector<VLambdaRow> rows;
    std::int64_t trials_ok = 0;
    std::int64_t budget_failures = 0;
    double c_fit = 0.0;  // sup_s s * p_hat

    Json to_json() const;
    std::string csv() const;
};

VLambdaReport v_lambda_tail_experiment(const ExperimentConfig& cfg, int threads);

struct PivotFreqReport {
    ExperimentConfig config;
    std::int64_t members = 0;
    std::int64_t non_members = 0;
    std::int64_t trials_ok = 0;
    std::int64_t budget_failures = 0;
    std::int64_t lemma_checked = 0;  // member trials whose pivot implication was asserted
    double p_fail = 0.0;             // empirical P{not in the event}
    stats::Interval ci95;
    double c_r_fit = 0.0;
    double envelope_fitted = 0.0;    // finite-grid failure envelope at c_r_fit

    Json to_json() const;
    std::string csv() const;
};

PivotFreqReport pivot_frequency_experiment(const ExperimentConfig& cfg, int threads);

struct MomentRow {
    std::string name;
    double estimate = 0.0;
    double se = 0.0;
    double bound = 0.0;  // envelope at the fitted constant; 0 when not applicable
};

struct LogBetaRow {
    int n = 0;
    double mean = 0.0;
    double se = 0.0;
    std::int64_t trials_ok = 0;
};

struct MomentsReport {
    ExperimentConfig config;
    std::vector<MomentRow> rows;
    // Mean log beta per dimension in config.n_list; decays like 1/n.
    std::vector<LogBetaRow> cross_dimension;
    std::int64_t trials_ok = 0;
    std::int64_t budget_failures = 0;
    std::int64_t uncertified_used_upper = 0;
    double c_r_fit = 0.0;
    double c_gamma_fit = 0.0;  // 12 * c_r_fit
    double log_beta_mean = 0.0;
    double log_beta_se = 0.0;

    Json to_json() const;
    std::string csv() const;
};

MomentsReport moment_experiment(const ExperimentConfig& cfg, int threads);

struct SweepRow {
    int n = 0;
    std::int64_t replicas_ok = 0;
    std::int64_t violations = 0;  // gamma_window > n^2
    double mean_beta = 0.0;
    double n_pow = 0.0;           // n^{2/n}
};

struct SweepReport {
    ExperimentConfig config;
    std::vector<SweepRow> rows;
    std::vector<std::int64_t> largest_violating_histogram;  // indexed like n_list; +1 slot for none
    double any_violation_freq_5_12 = 0.0;
    std::int64_t budget_failures = 0;
    double c_fit = 0.0;  // sup_n n^2 * p_hat(n)

    Json to_json() const;
    std::string csv() const;
};

SweepReport product_model_sweep(const ExperimentConfig& cfg, int threads);

// Shared per-trial pipeline: reduce, solve SVP, enumerate to the window
// that covers both r_window and the largest requested volume.
struct TrialProfile {
    CountProfile profile;
    BigInt q1;
};
TrialProfile build_trial_profile(const LatticeBasis& basis, double r_window,
                                 double extra_volume, const EnumerationBudget& budget);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace latprof
