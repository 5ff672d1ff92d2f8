#include "latprof/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "latprof/constants.hpp"
#include "latprof/geometry.hpp"
#include "latprof/parallel.hpp"

namespace latprof {

namespace {

constexpr double kGuard = 1e-9;

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

BigInt window_q(const BigInt& q1, double r_window) {
    const double target = q1.get_d() * r_window * r_window * (1.0 + kGuard);
    BigInt q;
    mpz_set_d(q.get_mpz_t(), std::floor(target));
    if (q < q1) q = q1;
    return q;
}

// Desk scale: full-profile experiments sweep ~r_window^n vectors per trial,
// shortest-vector-only experiments do not.
void require_experiment_dims(const ExperimentConfig& cfg, int max_n) {
    if (cfg.sampler.n < 3)
        throw ConfigError("experiments need n >= 3 (variance input restriction)");
    if (cfg.sampler.n > max_n)
        throw ConfigError("dimension " + std::to_string(cfg.sampler.n) +
                          " beyond the desk scale cap " + std::to_string(max_n));
    if (cfg.trials < 1) throw ConfigError("trials must be positive");
    if (!(cfg.r_window >= 1.0)) throw ConfigError("r_window must be >= 1");
}
constexpr int kFullProfileMaxN = 12;
constexpr int kShortestOnlyMaxN = 16;

// Per-trial status readable by the fixed-order aggregation pass.
struct TrialFlags {
    std::uint8_t status = 0;  // 0 ok, 1 budget exceeded
    std::string violation;    // nonempty: exactness firewall check name
};

void raise_first_violation(const std::vector<TrialFlags>& flags, const ExperimentConfig& cfg) {
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (!flags[i].violation.empty())
            throw FirewallViolation(flags[i].violation, static_cast<long long>(i),
                                    cfg.to_json().dump());
}

double mean_of(const std::vector<double>& xs) {
    return xs.empty() ? 0.0 : stats::mean_variance(xs).mean;
}

}  // namespace

int resolve_threads() {
    if (const char* env = std::getenv("THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
        throw ConfigError("THREADS must be a positive integer");
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

Json ExperimentConfig::to_json() const {
    Json j;
    j["model"] = "goldstein_mayer";
    j["n"] = sampler.n;
    j["p"] = sampler.p;
    j["seed"] = sampler.master_seed;
    j["r_window"] = r_window;
    j["trials"] = trials;
    j["volumes"] = volumes;
    j["thresholds"] = thresholds;
    j["pivot_s"] = pivot.s;
    j["pivot_theta"] = pivot.theta;
    j["pivot_eta"] = pivot.eta;
    j["j_max"] = j_max;
    j["moment_p"] = moment_p;
    j["truncation_a"] = truncation_a;
    j["n_list"] = n_list;
    j["output"] = output_path;
    j["scale_check_every"] = scale_check_every;
    j["max_vectors"] = budget.max_vectors;
    j["max_nodes"] = budget.max_nodes;
    return j;
}

namespace {

template <class T>
std::vector<T> parse_list(const std::string& value) {
    std::vector<T> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::stringstream conv(item);
        T v;
        if (!(conv >> v)) throw ConfigError("bad list entry: " + item);
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("empty list value");
    return out;
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    auto as_i64 = [&](const std::string& v) {
        std::stringstream conv(v);
        std::int64_t x;
        if (!(conv >> x)) throw ConfigError("bad integer for key " + key + ": " + v);
        return x;
    };
    auto as_u64 = [&](const std::string& v) {
        std::stringstream conv(v);
        std::uint64_t x;
        if (!(conv >> x)) throw ConfigError("bad integer for key " + key + ": " + v);
        return x;
    };
    auto as_double = [&](const std::string& v) {
        std::stringstream conv(v);
        double x;
        if (!(conv >> x)) throw ConfigError("bad number for key " + key + ": " + v);
        return x;
    };

    if (key == "n")
        cfg.sampler.n = static_cast<int>(as_i64(value));
    else if (key == "p")
        cfg.sampler.p = as_u64(value);
    else if (key == "seed")
        cfg.sampler.master_seed = as_u64(value);
    else if (key == "trials")
        cfg.trials = as_i64(value);
    else if (key == "r_window")
        cfg.r_window = as_double(value);
    else if (key == "volumes")
        cfg.volumes = parse_list<double>(value);
    else if (key == "thresholds")
        cfg.thresholds = parse_list<double>(value);
    else if (key == "pivot_s")
        cfg.pivot.s = as_double(value);
    else if (key == "pivot_theta")
        cfg.pivot.theta = as_double(value);
    else if (key == "pivot_eta")
        cfg.pivot.eta = as_double(value);
    else if (key == "j_max")
        cfg.j_max = static_cast<long>(as_i64(value));
    else if (key == "moment_p")
        cfg.moment_p = as_double(value);
    else if (key == "truncation_a")
        cfg.truncation_a = as_double(value);
    else if (key == "n_list")
        cfg.n_list = parse_list<int>(value);
    else if (key == "output")
        cfg.output_path = value;
    else if (key == "scale_check_every")
        cfg.scale_check_every = as_i64(value);
    else if (key == "max_vectors")
        cfg.budget.max_vectors = as_i64(value);
    else if (key == "max_nodes")
        cfg.budget.max_nodes = as_i64(value);
    else
        throw ConfigError("unknown config key: " + key);
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

double TailTable::p_hat(std::size_t i) const {
    return trials_ok > 0 ? static_cast<double>(exceed[i]) / static_cast<double>(trials_ok) : 0.0;
}

stats::Interval TailTable::ci(std::size_t i) const {
    return stats::wilson_interval(exceed[i], std::max<std::int64_t>(trials_ok, 1));
}

double TailTable::envelope(std::size_t i) const {
    return std::min(1.0, envelope_constant / thresholds[i]);
}

void TailTable::fit_constant() {
    envelope_constant = 0.0;
    for (std::size_t i = 0; i < thresholds.size(); ++i)
        envelope_constant = std::max(envelope_constant, thresholds[i] * p_hat(i));
}

Json TailTable::to_json() const {
    Json rows = Json::array();
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        Json r;
        r["T"] = thresholds[i];
        r["exceed"] = exceed[i];
        r["p_hat"] = p_hat(i);
        const auto iv = ci(i);
        r["ci_lo"] = iv.lo;
        r["ci_hi"] = iv.hi;
        r["envelope"] = envelope(i);
        r["t_times_p"] = thresholds[i] * p_hat(i);
        rows.push_back(r);
    }
    Json j;
    j["trials_ok"] = trials_ok;
    j["envelope_constant_fitted"] = envelope_constant;
    j["rows"] = rows;
    return j;
}

std::string TailTable::to_csv() const {
    std::string out = "T,exceed,trials,p_hat,ci_lo,ci_hi,envelope,t_times_p\n";
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        const auto iv = ci(i);
        out += fmt(thresholds[i]) + "," + std::to_string(exceed[i]) + "," +
               std::to_string(trials_ok) + "," + fmt(p_hat(i)) + "," + fmt(iv.lo) + "," +
               fmt(iv.hi) + "," + fmt(envelope(i)) + "," + fmt(thresholds[i] * p_hat(i)) + "\n";
    }
    return out;
}

TrialProfile build_trial_profile(const LatticeBasis& basis, double r_window, double extra_volume,
                                 const EnumerationBudget& budget) {
    const LatticeBasis red = reduce_basis(basis);
    const ShortestVector sv = shortest_vector(red, budget);
    BigInt q_w = window_q(sv.q, r_window);
    if (extra_volume > 0.0) {
        const BigInt q_extra = q_for_volume(basis.n, basis.det_abs, extra_volume);
        if (q_extra > q_w) q_w = q_extra;
    }
    TrialProfile tp{make_profile(red, q_w, budget), sv.q};
    return tp;
}

// ---------------------------------------------------------------------------
// Siegel / Rogers moment check
// ---------------------------------------------------------------------------

SiegelReport siegel_rogers_check(const ExperimentConfig& cfg, int threads) {
    require_experiment_dims(cfg, kShortestOnlyMaxN);
    if (cfg.volumes.empty()) throw ConfigError("volumes must be nonempty");
    const double v_max = *std::max_element(cfg.volumes.begin(), cfg.volumes.end());
    const auto sampler = make_sampler_config(cfg.sampler.n, cfg.sampler.p, cfg.sampler.master_seed);

    const std::size_t nv = cfg.volumes.size();
    std::vector<std::vector<std::int64_t>> m_slot(static_cast<std::size_t>(cfg.trials));
    std::vector<TrialFlags> flags(static_cast<std::size_t>(cfg.trials));

    run_trials(cfg.trials, threads, [&](std::int64_t i) {
        try {
            const LatticeBasis basis = sample_lattice(sampler, static_cast<std::uint64_t>(i));
            const BigInt q_w = q_for_volume(basis.n, basis.det_abs, v_max);
            const CountProfile prof = make_profile(basis, q_w, cfg.budget);
            auto& ms = m_slot[static_cast<std::size_t>(i)];
            ms.resize(nv);
            for (std::size_t k = 0; k < nv; ++k) ms[k] = m_of_v(prof, cfg.volumes[k]);
        } catch (const BudgetExceededError&) {
            flags[static_cast<std::size_t>(i)].status = 1;
        }
    });
    raise_first_violation(flags, cfg);

    SiegelReport rep;
    rep.config = cfg;
    for (std::size_t k = 0; k < nv; ++k) {
        std::vector<double> xs;
        std::int64_t zeros = 0;
        for (std::int64_t i = 0; i < cfg.trials; ++i) {
            if (flags[static_cast<std::size_t>(i)].status != 0) continue;
            const std::int64_t m = m_slot[static_cast<std::size_t>(i)][k];
            xs.push_back(static_cast<double>(m));
            if (m == 0) ++zeros;
        }
        SiegelRow row;
        row.v = cfg.volumes[k];
        row.m = stats::mean_variance(xs);
        row.var_over_v = row.m.var / row.v;
        row.zero_count = zeros;
        rep.rows.push_back(row);
        rep.trials_ok = row.m.count;
    }
    for (std::int64_t i = 0; i < cfg.trials; ++i)
        if (flags[static_cast<std::size_t>(i)].status != 0) ++rep.budget_failures;

    std::vector<double> vx, ratio;
    for (const auto& row : rep.rows) {
        rep.c_r_fit = std::max(rep.c_r_fit, row.var_over_v);
        if (rep.trials_ok > 0)
            rep.c_fit_empty = std::max(
                rep.c_fit_empty,
                row.v * static_cast<double>(row.zero_count) / static_cast<double>(rep.trials_ok));
        vx.push_back(row.v);
        ratio.push_back(row.var_over_v);
    }
    rep.kendall_p_incr = vx.size() <= 8 ? stats::kendall_pvalue_increasing(vx, ratio) : -1.0;
    return rep;
}

Json SiegelReport::to_json() const {
    Json rows_j = Json::array();
    for (const auto& r : rows) {
        Json x;
        x["V"] = r.v;
        x["mean"] = r.m.mean;
        x["se_mean"] = r.m.se_mean;
        x["var"] = r.m.var;
        x["var_over_v"] = r.var_over_v;
        x["p_zero"] = trials_ok > 0 ? static_cast<double>(r.zero_count) / trials_ok : 0.0;
        rows_j.push_back(x);
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["artifact_version"] = kArtifactVersion;
    j["experiment"] = "siegel_rogers";
    j["config"] = config.to_json();
    j["trials_ok"] = trials_ok;
    j["budget_failures"] = budget_failures;
    j["c_fit_empty"] = c_fit_empty;
    j["c_r_fit"] = c_r_fit;
    j["kendall_p_increasing_var_ratio"] = kendall_p_incr;
    j["rows"] = rows_j;
    return j;
}

std::string SiegelReport::csv() const {
    std::string out = "V,mean,se_mean,var,var_over_v,p_zero,empty_envelope,zero_count,trials\n";
    for (const auto& r : rows) {
        const double pz = trials_ok > 0 ? static_cast<double>(r.zero_count) / trials_ok : 0.0;
        out += fmt(r.v) + "," + fmt(r.m.mean) + "," + fmt(r.m.se_mean) + "," + fmt(r.m.var) + "," +
               fmt(r.var_over_v) + "," + fmt(pz) + "," + fmt(std::min(1.0, c_fit_empty / r.v)) +
               "," + std::to_string(r.zero_count) + "," + std::to_string(trials_ok) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// gamma tail
// ---------------------------------------------------------------------------

namespace {

struct GammaSlot {
    double gamma_w = 0.0;
    double tau = 0.0;
    bool certified = false;
};

}  // namespace

GammaTailReport gamma_tail_experiment(const ExperimentConfig& cfg, int threads) {
    require_experiment_dims(cfg, kFullProfileMaxN);
    if (cfg.thresholds.empty()) throw ConfigError("thresholds must be nonempty");
    const auto sampler = make_sampler_config(cfg.sampler.n, cfg.sampler.p, cfg.sampler.master_seed);

    std::vector<GammaSlot> slots(static_cast<std::size_t>(cfg.trials));
    std::vector<TrialFlags> flags(static_cast<std::size_t>(cfg.trials));
    std::vector<std::uint8_t> scale_checked(static_cast<std::size_t>(cfg.trials), 0);

    run_trials(cfg.trials, threads, [&](std::int64_t i) {
        auto& flag = flags[static_cast<std::size_t>(i)];
        try {
            const LatticeBasis basis = sample_lattice(sampler, static_cast<std::uint64_t>(i));
            const TrialProfile tp = build_trial_profile(basis, cfg.r_window, 0.0, cfg.budget);
            const GammaResult g = gamma(tp.profile, cfg.r_window);
            auto& slot = slots[static_cast<std::size_t>(i)];
            slot.gamma_w = g.gamma_window;
            slot.tau = static_cast<double>(g.tau);
            slot.certified = g.certified;
            if (!(g.gamma_window >= static_cast<double>(g.tau))) {
                flag.violation = "tau <= gamma";
                return;
            }
            if (cfg.scale_check_every > 0 && i % cfg.scale_check_every == 0) {
                scale_checked[static_cast<std::size_t>(i)] = 1;
                const LatticeBasis scaled = scale_basis(basis, 2);
                const BigInt q_w_scaled = tp.profile.q_window * 4;
                const CountProfile sprof = make_profile(scaled, q_w_scaled, cfg.budget);
                const GammaResult sg = gamma(sprof, cfg.r_window);
                const bool same = sg.gamma_window == g.gamma_window && sg.beta == g.beta &&
                                  sprof.vol == tp.profile.vol && sprof.cum == tp.profile.cum;
                if (!same) {
                    flag.violation = "scale invariance";
                    return;
                }
            }
        } catch (const BudgetExceededError&) {
            flag.status = 1;
        }
    });
    raise_first_violation(flags, cfg);

    GammaTailReport rep;
    rep.config = cfg;
    rep.gamma_table.thresholds = cfg.thresholds;
    rep.gamma_table.exceed.assign(cfg.thresholds.size(), 0);
    rep.tau_table = rep.gamma_table;
    for (std::int64_t i = 0; i < cfg.trials; ++i) {
        const auto& flag = flags[static_cast<std::size_t>(i)];
        if (flag.status != 0) {
            ++rep.budget_failures;
            continue;
        }
        ++rep.trials_ok;
        const auto& slot = slots[static_cast<std::size_t>(i)];
        if (!slot.certified) ++rep.uncertified;
        if (scale_checked[static_cast<std::size_t>(i)]) ++rep.scale_checks;
        for (std::size_t k = 0; k < cfg.thresholds.size(); ++k) {
            if (slot.gamma_w > cfg.thresholds[k]) ++rep.gamma_table.exceed[k];
            if (slot.tau > cfg.thresholds[k]) ++rep.tau_table.exceed[k];
        }
    }
    rep.gamma_table.trials_ok = rep.trials_ok;
    rep.tau_table.trials_ok = rep.trials_ok;
    rep.gamma_table.fit_constant();
    rep.tau_table.fit_constant();
    rep.sup_t_phat = rep.gamma_table.envelope_constant;

    std::vector<double> tx, ty;
    for (std::size_t k = 0; k < cfg.thresholds.size(); ++k) {
        if (cfg.thresholds[k] < 2.0) continue;
        tx.push_back(cfg.thresholds[k]);
        ty.push_back(cfg.thresholds[k] * rep.gamma_table.p_hat(k));
    }
    rep.kendall_p_incr = tx.size() >= 2 && tx.size() <= 8
                             ? stats::kendall_pvalue_increasing(tx, ty)
                             : -1.0;
    return rep;
}

Json GammaTailReport::to_json() const {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["artifact_version"] = kArtifactVersion;
    j["experiment"] = "gamma_tail";
    j["config"] = config.to_json();
    j["trials_ok"] = trials_ok;
    j["budget_failures"] = budget_failures;
    j["uncertified"] = uncertified;
    j["scale_checks"] = scale_checks;
    j["sup_t_phat"] = sup_t_phat;
    j["kendall_p_increasing"] = kendall_p_incr;
    j["gamma_table"] = gamma_table.to_json();
    j["tau_table"] = tau_table.to_json();
    return j;
}

std::vector<std::pair<std::string, std::string>> GammaTailReport::csv_tables() const {
    return {{"gamma_tail.csv", gamma_table.to_csv()}, {"tau_tail.csv", tau_table.to_csv()}};
}

// ---------------------------------------------------------------------------
// V_lambda tail
// ---------------------------------------------------------------------------

VLambdaReport v_lambda_tail_experiment(const ExperimentConfig& cfg, int threads) {
    require_experiment_dims(cfg, kShortestOnlyMaxN);
    if (cfg.volumes.empty()) throw ConfigError("volumes must be nonempty");
    const auto sampler = make_sampler_config(cfg.sampler.n, cfg.sampler.p, cfg.sampler.master_seed);

    std::vector<double> vlam(static_cast<std::size_t>(cfg.trials), 0.0);
    std::vector<TrialFlags> flags(static_cast<std::size_t>(cfg.trials));
    run_trials(cfg.trials, threads, [&](std::int64_t i) {
        try {
            const LatticeBasis basis = sample_lattice(sampler, static_cast<std::uint64_t>(i));
            const ShortestVector sv = shortest_vector(basis, cfg.budget);
            vlam[static_cast<std::size_t>(i)] =
                normalized_jump_volume(basis.n, basis.det_abs, sv.q);
        } catch (const BudgetExceededError&) {
            flags[static_cast<std::size_t>(i)].status = 1;
        }
    });
    raise_first_violation(flags, cfg);

    VLambdaReport rep;
    rep.config = cfg;
    for (double s : cfg.volumes) rep.rows.push_back({s, 0});
    for (std::int64_t i = 0; i < cfg.trials; ++i) {
        if (flags[static_cast<std::size_t>(i)].status != 0) {
            ++rep.budget_failures;
            continue;
        }
        ++rep.trials_ok;
        for (auto& row : rep.rows)
            if (vlam[static_cast<std::size_t>(i)] > row.s) ++row.exceed;
    }
    for (const auto& row : rep.rows)
        if (rep.trials_ok > 0)
            rep.c_fit = std::max(rep.c_fit, row.s * static_cast<double>(row.exceed) /
                                                static_cast<double>(rep.trials_ok));
    return rep;
}

Json VLambdaReport::to_json() const {
    Json rows_j = Json::array();
    for (const auto& r : rows) {
        const double p = trials_ok > 0 ? static_cast<double>(r.exceed) / trials_ok : 0.0;
        const auto iv = stats::wilson_interval(r.exceed, std::max<std::int64_t>(trials_ok, 1));
        Json x;
        x["s"] = r.s;
        x["exceed"] = r.exceed;
        x["p_hat"] = p;
        x["ci_lo"] = iv.lo;
        x["ci_hi"] = iv.hi;
        x["poisson_reference"] = std::exp(-r.s);
        x["pair_poisson_reference"] = std::exp(-0.5 * r.s);
        x["envelope"] = std::min(1.0, c_fit / r.s);
        rows_j.push_back(x);
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["artifact_version"] = kArtifactVersion;
    j["experiment"] = "vlambda_tail";
    j["config"] = config.to_json();
    j["trials_ok"] = trials_ok;
    j["budget_failures"] = budget_failures;
    j["c_fit"] = c_fit;
    j["rows"] = rows_j;
    return j;
}

std::string VLambdaReport::csv() const {
    std::string out = "s,exceed,trials,p_hat,ci_lo,ci_hi,poisson_ref,pair_poisson_ref,envelope\n";
    for (const auto& r : rows) {
        const double p = trials_ok > 0 ? static_cast<double>(r.exceed) / trials_ok : 0.0;
        const auto iv = stats::wilson_interval(r.exceed, std::max<std::int64_t>(trials_ok, 1));
        out += fmt(r.s) + "," + std::to_string(r.exceed) + "," + std::to_string(trials_ok) + "," +
               fmt(p) + "," + fmt(iv.lo) + "," + fmt(iv.hi) + "," + fmt(std::exp(-r.s)) + "," +
               fmt(std::exp(-0.5 * r.s)) + "," + fmt(std::min(1.0, c_fit / r.s)) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// pivot event frequency
// ---------------------------------------------------------------------------

PivotFreqReport pivot_frequency_experiment(const ExperimentConfig& cfg, int threads) {
    require_experiment_dims(cfg, kFullProfileMaxN);
    if (cfg.j_max < 0) throw ConfigError("j_max must be nonnegative");
    const auto sampler = make_sampler_config(cfg.sampler.n, cfg.sampler.p, cfg.sampler.master_seed);

    // The profile must cover the grid with one spare step.
    const double grid_top = cfg.pivot.s * std::pow(cfg.pivot.theta, cfg.j_max);
    const double profile_volume = grid_top * cfg.pivot.theta;
    if (profile_volume * 4.0 > static_cast<double>(cfg.budget.max_vectors))
        throw ConfigError("pivot grid volume exceeds the enumeration budget; lower s, theta or j_max");

    std::vector<std::uint8_t> member_slot(static_cast<std::size_t>(cfg.trials), 0);
    std::vector<std::vector<std::int64_t>> m_slot(static_cast<std::size_t>(cfg.trials));
    std::vector<TrialFlags> flags(static_cast<std::size_t>(cfg.trials));
    const std::size_t nv = cfg.volumes.size();

    run_trials(cfg.trials, threads, [&](std::int64_t i) {
        auto& flag = flags[static_cast<std::size_t>(i)];
        try {
            const LatticeBasis basis = sample_lattice(sampler, static_cast<std::uint64_t>(i));
            const BigInt q_w = q_for_volume(basis.n, basis.det_abs, profile_volume);
            const CountProfile prof = make_profile(basis, q_w, cfg.budget);
            const PivotMembership mem = pivot_event_membership(prof, cfg.pivot, cfg.j_max);
            member_slot[static_cast<std::size_t>(i)] = mem.member ? 1 : 0;
            if (mem.member) {
                // Exact implication: gamma restricted to the grid-covered
                // window never exceeds theta (1+eta) s.
                const double g_grid = gamma_up_to_volume(prof, grid_top);
                const double cap = cfg.pivot.theta * (1.0 + cfg.pivot.eta) * cfg.pivot.s;
                if (g_grid > cap * (1.0 + 1e-12)) {
                    flag.violation = "deterministic pivot lemma";
                    return;
                }
            }
            auto& ms = m_slot[static_cast<std::size_t>(i)];
            ms.resize(nv);
            for (std::size_t k = 0; k < nv; ++k)
                ms[k] = cfg.volumes[k] <= prof.window_volume ? m_of_v(prof, cfg.volumes[k]) : -1;
        } catch (const BudgetExceededError&) {
            flag.status = 1;
        }
    });
    raise_first_violation(flags, cfg);

    PivotFreqReport rep;
    rep.config = cfg;
    for (std::int64_t i = 0; i < cfg.trials; ++i) {
        if (flags[static_cast<std::size_t>(i)].status != 0) {
            ++rep.budget_failures;
            continue;
        }
        ++rep.trials_ok;
        if (member_slot[static_cast<std::size_t>(i)]) {
            ++rep.members;
            ++rep.lemma_checked;
        } else {
            ++rep.non_members;
        }
    }
    for (std::size_t k = 0; k < nv; ++k) {
        std::vector<double> xs;
        for (std::int64_t i = 0; i < cfg.trials; ++i) {
            if (flags[static_cast<std::size_t>(i)].status != 0) continue;
            const auto& ms = m_slot[static_cast<std::size_t>(i)];
            if (k < ms.size() && ms[k] >= 0) xs.push_back(static_cast<double>(ms[k]));
        }
        if (xs.size() >= 2) {
            const auto mv = stats::mean_variance(xs);
            rep.c_r_fit = std::max(rep.c_r_fit, mv.var / cfg.volumes[k]);
        }
    }
    if (rep.trials_ok > 0) {
        rep.p_fail = static_cast<double>(rep.non_members) / static_cast<double>(rep.trials_ok);
        rep.ci95 = stats::wilson_interval(rep.non_members, rep.trials_ok);
    }
    const double c_r = rep.c_r_fit > 0.0 ? rep.c_r_fit : 1.0;
    rep.envelope_fitted = constants::pivot_failure_envelope(cfg.pivot.s, cfg.pivot.theta,
                                                            cfg.pivot.eta, c_r, cfg.j_max);
    return rep;
}

Json PivotFreqReport::to_json() const {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["artifact_version"] = kArtifactVersion;
    j["experiment"] = "pivot_frequency";
    j["config"] = config.to_json();
    j["trials_ok"] = trials_ok;
    j["budget_failures"] = budget_failures;
    j["members"] = members;
    j["non_members"] = non_members;
    j["lemma_checked"] = lemma_checked;
    j["lemma_violations"] = 0;  // a violation aborts the run instead
    j["p_fail"] = p_fail;
    j["ci_lo"] = ci95.lo;
    j["ci_hi"] = ci95.hi;
    j["c_r_fit"] = c_r_fit;
    j["envelope_fitted"] = envelope_fitted;
    return j;
}

std::string PivotFreqReport::csv() const {
    std::string out =
        "s,theta,eta,j_max,members,non_members,trials,p_fail,ci_lo,ci_hi,envelope_fitted,c_r_"
        "fit\n";
    out += fmt(config.pivot.s) + "," + fmt(config.pivot.theta) + "," + fmt(config.pivot.eta) +
           "," + std::to_string(config.j_max) + "," + std::to_string(members) + "," +
           std::to_string(non_members) + "," + std::to_string(trials_ok) + "," + fmt(p_fail) +
           "," + fmt(ci95.lo) + "," + fmt(ci95.hi) + "," + fmt(envelope_fitted) + "," +
           fmt(c_r_fit) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------------

namespace {

// Mean of log beta = log(gamma)/n at one dimension, on streams disjoint
// across n so the per-dimension samples are independent.
LogBetaRow log_beta_for_dimension(const ExperimentConfig& cfg, int n, int threads) {
    const auto sampler = make_sampler_config(n, cfg.sampler.p, cfg.sampler.master_seed);
    std::vector<double> vals(static_cast<std::size_t>(cfg.trials), 0.0);
    std::vector<std::uint8_t> ok(static_cast<std::size_t>(cfg.trials), 0);
    run_trials(cfg.trials, threads, [&](std::int64_t i) {
        try {
            const std::uint64_t stream =
                static_cast<std::uint64_t>(i) * 256ULL + static_cast<std::uint64_t>(n);
            const LatticeBasis basis = sample_lattice(sampler, stream);
            const TrialProfile tp = build_trial_profile(basis, cfg.r_window, 0.0, cfg.budget);
            const GammaResult g = gamma(tp.profile, cfg.r_window);
            vals[static_cast<std::size_t>(i)] =
                std::log(g.certified ? g.gamma_window : g.gamma_upper) / n;
            ok[static_cast<std::size_t>(i)] = 1;
        } catch (const BudgetExceededError&) {
        }
    });
    std::vector<double> xs;
    for (std::int64_t i = 0; i < cfg.trials; ++i)
        if (ok[static_cast<std::size_t>(i)]) xs.push_back(vals[static_cast<std::size_t>(i)]);
    const auto mv = stats::mean_variance(xs);
    return LogBetaRow{n, mv.mean, mv.se_mean, mv.count};
}

}  // namespace

MomentsReport moment_experiment(const ExperimentConfig& cfg, int threads) {
    require_experiment_dims(cfg, kFullProfileMaxN);
    if (!(cfg.moment_p > 0.0 && cfg.moment_p < 1.0))
        throw ConfigError("moment exponent must lie in (0, 1)");
    if (!(cfg.truncation_a >= 2.0)) throw ConfigError("truncation level must be >= 2");
    for (int n : cfg.n_list)
        if (n < 3 || n > kFullProfileMaxN)
            throw ConfigError("n_list dimensions must lie in [3, 12]");
    const auto sampler = make_sampler_config(cfg.sampler.n, cfg.sampler.p, cfg.sampler.master_seed);
    const double v_max =
        cfg.volumes.empty() ? 0.0 : *std::max_element(cfg.volumes.begin(), cfg.volumes.end());

    struct Slot {
        double value = 0.0;
        bool used_upper = false;
        std::vector<std::int64_t> m;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(cfg.trials));
    std::vector<TrialFlags> flags(static_cast<std::size_t>(cfg.trials));
    const std::size_t nv = cfg.volumes.size();

    run_trials(cfg.trials, threads, [&](std::int64_t i) {
        try {
            const LatticeBasis basis = sample_lattice(sampler, static_cast<std::uint64_t>(i));
            const TrialProfile tp = build_trial_profile(basis, cfg.r_window, v_max, cfg.budget);
            const GammaResult g = gamma(tp.profile, cfg.r_window);
            auto& slot = slots[static_cast<std::size_t>(i)];
            slot.value = g.certified ? g.gamma_window : g.gamma_upper;
            slot.used_upper = !g.certified;
            slot.m.resize(nv);
            for (std::size_t k = 0; k < nv; ++k) slot.m[k] = m_of_v(tp.profile, cfg.volumes[k]);
        } catch (const BudgetExceededError&) {
            flags[static_cast<std::size_t>(i)].status = 1;
        }
    });
    raise_first_violation(flags, cfg);

    MomentsReport rep;
    rep.config = cfg;
    std::vector<double> frac, trunc, log1g, logb;
    for (std::int64_t i = 0; i < cfg.trials; ++i) {
        if (flags[static_cast<std::size_t>(i)].status != 0) {
            ++rep.budget_failures;
            continue;
        }
        ++rep.trials_ok;
        const auto& slot = slots[static_cast<std::size_t>(i)];
        if (slot.used_upper) ++rep.uncertified_used_upper;
        frac.push_back(std::pow(slot.value, cfg.moment_p));
        trunc.push_back(std::min(slot.value, cfg.truncation_a));
        log1g.push_back(std::log1p(slot.value));
        logb.push_back(std::log(slot.value) / cfg.sampler.n);
    }
    for (std::size_t k = 0; k < nv; ++k) {
        std::vector<double> xs;
        for (std::int64_t i = 0; i < cfg.trials; ++i) {
            if (flags[static_cast<std::size_t>(i)].status != 0) continue;
            xs.push_back(static_cast<double>(slots[static_cast<std::size_t>(i)].m[k]));
        }
        if (xs.size() >= 2)
            rep.c_r_fit = std::max(rep.c_r_fit, stats::mean_variance(xs).var / cfg.volumes[k]);
    }
    rep.c_gamma_fit = 12.0 * rep.c_r_fit;

    const double p = cfg.moment_p;
    const double a = cfg.truncation_a;
    auto push = [&](const std::string& name, const std::vector<double>& xs, double bound) {
        const auto mv = stats::mean_variance(xs);
        rep.rows.push_back({name, mv.mean, mv.se_mean, bound});
    };
    push("gamma_p", frac,
         std::pow(2.0, p) + p * rep.c_gamma_fit / (1.0 - p) * std::pow(2.0, p - 1.0));
    push("min_gamma_A", trunc, 2.0 + rep.c_gamma_fit * std::log(a));
    const double log_bound = std::log(3.0) + 2.0 * rep.c_gamma_fit / 3.0;
    push("log1p_gamma", log1g, log_bound);
    push("log_beta", logb, log_bound / cfg.sampler.n);
    rep.log_beta_mean = rep.rows.back().estimate;
    rep.log_beta_se = rep.rows.back().se;
    for (int n : cfg.n_list) rep.cross_dimension.push_back(log_beta_for_dimension(cfg, n, threads));
    return rep;
}

Json MomentsReport::to_json() const {
    Json rows_j = Json::array();
    for (const auto& r : rows) {
        Json x;
        x["name"] = r.name;
        x["estimate"] = r.estimate;
        x["se"] = r.se;
        x["bound_fitted"] = r.bound;
        rows_j.push_back(x);
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["artifact_version"] = kArtifactVersion;
    j["experiment"] = "moments";
    j["config"] = config.to_json();
    j["trials_ok"] = trials_ok;
    j["budget_failures"] = budget_failures;
    j["uncertified_used_upper"] = uncertified_used_upper;
    j["c_r_fit"] = c_r_fit;
    j["c_gamma_fit"] = c_gamma_fit;
    j["log_beta_mean"] = log_beta_mean;
    j["log_beta_se"] = log_beta_se;
    j["rows"] = rows_j;
    Json cross = Json::array();
    for (const auto& r : cross_dimension) {
        Json x;
        x["n"] = r.n;
        x["log_beta_mean"] = r.mean;
        x["log_beta_se"] = r.se;
        x["trials_ok"] = r.trials_ok;
        cross.push_back(x);
    }
    j["log_beta_by_n"] = cross;
    return j;
}

std::string MomentsReport::csv() const {
    std::string out = "statistic,estimate,se,bound_fitted\n";
    for (const auto& r : rows)
        out += r.name + "," + fmt(r.estimate) + "," + fmt(r.se) + "," + fmt(r.bound) + "\n";
    if (!cross_dimension.empty()) {
        out += "\nn,log_beta_mean,log_beta_se,trials_ok\n";
        for (const auto& r : cross_dimension)
            out += std::to_string(r.n) + "," + fmt(r.mean) + "," + fmt(r.se) + "," +
                   std::to_string(r.trials_ok) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// product-model sweep
// ---------------------------------------------------------------------------

SweepReport product_model_sweep(const ExperimentConfig& cfg, int threads) {
    if (cfg.n_list.empty()) throw ConfigError("n_list must be nonempty");
    for (int n : cfg.n_list)
        if (n < 3 || n > kFullProfileMaxN)
            throw ConfigError("sweep dimensions must lie in [3, 12]");
    if (cfg.trials < 1) throw ConfigError("trials must be positive");
    if (!is_prime_u64(cfg.sampler.p)) throw ConfigError("sampler modulus p must be prime");

    const std::size_t nn = cfg.n_list.size();
    const std::int64_t total = cfg.trials * static_cast<std::int64_t>(nn);
    std::vector<double> gamma_slot(static_cast<std::size_t>(total), -1.0);
    std::vector<TrialFlags> flags(static_cast<std::size_t>(total));

    run_trials(total, threads, [&](std::int64_t idx) {
        const std::int64_t replica = idx / static_cast<std::int64_t>(nn);
        const int n = cfg.n_list[static_cast<std::size_t>(idx % static_cast<std::int64_t>(nn))];
        try {
            const SamplerConfig sc{n, cfg.sampler.p, cfg.sampler.master_seed};
            // Distinct stream per (replica, n): dimensions must be independent.
            const std::uint64_t stream =
                static_cast<std::uint64_t>(replica) * 256ULL + static_cast<std::uint64_t>(n);
            const LatticeBasis basis = sample_lattice(sc, stream);
            const TrialProfile tp = build_trial_profile(basis, cfg.r_window, 0.0, cfg.budget);
            const GammaResult g = gamma(tp.profile, cfg.r_window);
            gamma_slot[static_cast<std::size_t>(idx)] = g.gamma_window;
        } catch (const BudgetExceededError&) {
            flags[static_cast<std::size_t>(idx)].status = 1;
        }
    });
    raise_first_violation(flags, cfg);

    SweepReport rep;
    rep.config = cfg;
    rep.largest_violating_histogram.assign(nn + 1, 0);
    std::vector<std::vector<double>> betas(nn);
    std::vector<std::int64_t> ok(nn, 0), viol(nn, 0);
    std::int64_t any_5_12 = 0;
    for (std::int64_t r = 0; r < cfg.trials; ++r) {
        int largest_idx = -1;
        bool any_in_range = false;
        for (std::size_t k = 0; k < nn; ++k) {
            const std::int64_t idx = r * static_cast<std::int64_t>(nn) + static_cast<std::int64_t>(k);
            if (flags[static_cast<std::size_t>(idx)].status != 0) {
                ++rep.budget_failures;
                continue;
            }
            const int n = cfg.n_list[k];
            const double g = gamma_slot[static_cast<std::size_t>(idx)];
            ++ok[k];
            betas[k].push_back(std::pow(g, 1.0 / n));
            if (g > static_cast<double>(n) * n) {
                ++viol[k];
                if (largest_idx < 0 || n > cfg.n_list[static_cast<std::size_t>(largest_idx)])
                    largest_idx = static_cast<int>(k);
                if (n >= 5 && n <= 12) any_in_range = true;
            }
        }
        if (largest_idx >= 0)
            ++rep.largest_violating_histogram[static_cast<std::size_t>(largest_idx)];
        else
            ++rep.largest_violating_histogram[nn];
        if (any_in_range) ++any_5_12;
    }
    rep.any_violation_freq_5_12 =
        cfg.trials > 0 ? static_cast<double>(any_5_12) / static_cast<double>(cfg.trials) : 0.0;
    for (std::size_t k = 0; k < nn; ++k) {
        SweepRow row;
        row.n = cfg.n_list[k];
        row.replicas_ok = ok[k];
        row.violations = viol[k];
        row.mean_beta = mean_of(betas[k]);
        row.n_pow = std::pow(static_cast<double>(row.n), 2.0 / row.n);
        rep.rows.push_back(row);
        if (ok[k] > 0)
            rep.c_fit = std::max(rep.c_fit, static_cast<double>(row.n) * row.n *
                                                static_cast<double>(viol[k]) /
                                                static_cast<double>(ok[k]));
    }
    return rep;
}

Json SweepReport::to_json() const {
    Json rows_j = Json::array();
    for (const auto& r : rows) {
        const auto iv = stats::wilson_interval(r.violations, std::max<std::int64_t>(r.replicas_ok, 1));
        Json x;
        x["n"] = r.n;
        x["replicas_ok"] = r.replicas_ok;
        x["violations"] = r.violations;
        x["p_violation"] =
            r.replicas_ok > 0 ? static_cast<double>(r.violations) / r.replicas_ok : 0.0;
        x["ci_lo"] = iv.lo;
        x["ci_hi"] = iv.hi;
        x["mean_beta"] = r.mean_beta;
        x["n_pow_2_over_n"] = r.n_pow;
        x["envelope"] = std::min(1.0, c_fit / (static_cast<double>(r.n) * r.n));
        rows_j.push_back(x);
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["artifact_version"] = kArtifactVersion;
    j["experiment"] = "product_model_sweep";
    j["config"] = config.to_json();
    j["budget_failures"] = budget_failures;
    j["any_violation_freq_n_5_12"] = any_violation_freq_5_12;
    j["largest_violating_histogram"] = largest_violating_histogram;
    j["c_fit"] = c_fit;
    j["rows"] = rows_j;
    return j;
}

std::string SweepReport::csv() const {
    std::string out = "n,replicas_ok,violations,p_violation,mean_beta,n_pow_2_over_n,envelope\n";
    for (const auto& r : rows) {
        const double p = r.replicas_ok > 0 ? static_cast<double>(r.violations) / r.replicas_ok : 0.0;
        out += std::to_string(r.n) + "," + std::to_string(r.replicas_ok) + "," +
               std::to_string(r.violations) + "," + fmt(p) + "," + fmt(r.mean_beta) + "," +
               fmt(r.n_pow) + "," + fmt(std::min(1.0, c_fit / (static_cast<double>(r.n) * r.n))) +
               "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
}

}  // namespace latprof
