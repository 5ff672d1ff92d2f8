#include "latprof/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "latprof/constants.hpp"
#include "latprof/experiments.hpp"
#include "latprof/parallel.hpp"
#include "latprof/svg.hpp"

namespace latprof {

namespace {

Json gamma_result_json(const GammaResult& g) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["artifact_version"] = kArtifactVersion;
    j["gamma_window"] = g.gamma_window;
    if (g.certified)
        j["gamma_certified_upper"] = g.gamma_upper;
    else
        j["gamma_certified_upper"] = "uncertified";
    j["gamma_upper_bound"] = g.gamma_upper;
    j["certified"] = g.certified;
    j["v_lambda"] = g.v_lambda;
    j["tau"] = g.tau;
    j["beta"] = g.beta;
    j["b"] = g.b;
    j["r_window"] = g.r_window;
    j["convention"] = g.convention == Convention::oriented ? "oriented" : "unoriented";
    return j;
}

Json tail_report_json(const TailReport& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["artifact_version"] = kArtifactVersion;
    j["experiment"] = "pivot_sim";
    j["process"] = r.process;
    j["s"] = r.s;
    j["theta"] = r.theta;
    j["eta"] = r.eta;
    j["trials"] = r.trials;
    j["window"] = r.window;
    j["seed"] = r.seed;
    j["threshold"] = r.threshold;
    j["exceed_count"] = r.exceed_count;
    j["p_hat"] = r.p_hat;
    j["ci_lo"] = r.ci95.lo;
    j["ci_hi"] = r.ci95.hi;
    j["envelope"] = r.envelope;
    j["vacuous_bound"] = r.vacuous;
    j["window_truncated"] = r.window_truncated;
    return j;
}

std::vector<svg::TailPoint> tail_points(const TailTable& t) {
    std::vector<svg::TailPoint> pts;
    for (std::size_t i = 0; i < t.thresholds.size(); ++i) {
        const auto iv = t.ci(i);
        pts.push_back({t.thresholds[i], t.p_hat(i), iv.lo, iv.hi, t.envelope(i)});
    }
    return pts;
}

void write_artifacts(const std::string& prefix, const Json& summary,
                     const std::vector<std::pair<std::string, std::string>>& csvs,
                     std::ostream& out) {
    write_text_file(prefix + "_summary.json", summary.dump(2) + "\n");
    for (const auto& [name, content] : csvs) write_text_file(prefix + "_" + name, content);
    out << summary.dump(2) << "\n";
}

struct ExperimentFlags {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    bool emit_svg = false;
};

ExperimentConfig assemble_config(const ExperimentFlags& flags) {
    ExperimentConfig cfg;
    if (!flags.config_path.empty()) cfg = load_config_file(flags.config_path);
    for (const auto& [key, value] : flags.overrides) apply_config_entry(cfg, key, value);
    return cfg;
}

// Registers one --flag that funnels into the key = value config machinery,
// so CLI overrides and config files share a single parser.
void add_override(CLI::App* sub, ExperimentFlags& flags, const std::string& flag,
                  const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&flags, key](const std::string& v) { flags.overrides.emplace_back(key, v); }, help);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"lattice kissing-profile toolkit"};
    app.require_subcommand(1);

    std::string bundle_prefix;

    // ---- profile ----------------------------------------------------------
    auto* profile_cmd = app.add_subcommand("profile", "jump profile of a basis as CSV");
    std::string profile_basis, profile_csv, profile_svg;
    double profile_r = 3.0;
    profile_cmd->add_option("--basis-file", profile_basis, "basis text file")->required();
    profile_cmd->add_option("--r-window", profile_r, "window radius ratio (>= 1)");
    profile_cmd->add_option("--csv", profile_csv, "write CSV here instead of stdout");
    profile_cmd->add_option("--svg", profile_svg, "also write a G(V) chart");
    profile_cmd->callback([&] {
        const LatticeBasis basis = read_basis_file(profile_basis);
        const TrialProfile tp = build_trial_profile(basis, profile_r, 0.0, EnumerationBudget{});
        std::ostringstream csv;
        write_profile_csv(csv, tp.profile);
        if (profile_csv.empty())
            out << csv.str();
        else
            write_text_file(profile_csv, csv.str());
        if (!profile_svg.empty())
            write_text_file(profile_svg,
                            svg::render_curve_svg(profile_curve(tp.profile), "normalized profile"));
    });

    // ---- gamma ------------------------------------------------------------
    auto* gamma_cmd = app.add_subcommand("gamma", "window-restricted gamma with certification");
    std::string gamma_basis;
    double gamma_r = 3.0;
    bool gamma_unoriented = false;
    gamma_cmd->add_option("--basis-file", gamma_basis, "basis text file")->required();
    gamma_cmd->add_option("--r-window", gamma_r, "window radius ratio (>= 1)");
    gamma_cmd->add_flag("--unoriented", gamma_unoriented, "count {x, -x} pairs once");
    gamma_cmd->callback([&] {
        const LatticeBasis basis = read_basis_file(gamma_basis);
        const TrialProfile tp = build_trial_profile(basis, gamma_r, 0.0, EnumerationBudget{});
        const GammaResult g = gamma(
            tp.profile, gamma_r, gamma_unoriented ? Convention::unoriented : Convention::oriented);
        out << gamma_result_json(g).dump(2) << "\n";
    });

    // ---- sample -----------------------------------------------------------
    auto* sample_cmd = app.add_subcommand("sample", "draw Goldstein-Mayer bases");
    int sample_n = 6;
    std::uint64_t sample_p = 1000003ULL, sample_seed = 1ULL;
    std::int64_t sample_trials = 1;
    std::string sample_dir;
    sample_cmd->add_option("--n", sample_n, "dimension");
    sample_cmd->add_option("--p", sample_p, "prime modulus");
    sample_cmd->add_option("--seed", sample_seed, "master seed");
    sample_cmd->add_option("--trials", sample_trials, "number of bases");
    sample_cmd->add_option("--out-dir", sample_dir, "write basis_<k>.txt files here");
    sample_cmd->callback([&] {
        const SamplerConfig sc = make_sampler_config(sample_n, sample_p, sample_seed);
        for (std::int64_t k = 0; k < sample_trials; ++k) {
            const LatticeBasis b = sample_lattice(sc, static_cast<std::uint64_t>(k));
            if (sample_dir.empty()) {
                std::ostringstream os;
                write_basis_text(os, b);
                out << os.str();
                if (k + 1 < sample_trials) out << "\n";
            } else {
                std::ostringstream os;
                write_basis_text(os, b);
                write_text_file(sample_dir + "/basis_" + std::to_string(k) + ".txt", os.str());
            }
        }
    });

    // ---- constants --------------------------------------------------------
    auto* const_cmd = app.add_subcommand("constants", "grid-parameter algebra as JSON");
    double const_theta = 2.0, const_eta = 1.0;
    std::optional<double> const_cr;
    bool const_minimize = false, const_table = false;
    const_cmd->add_option("--theta", const_theta, "grid ratio (> 1)");
    const_cmd->add_option("--eta", const_eta, "count slack (> 0)");
    const_cmd->add_option("--c-r", const_cr, "variance constant multiplier");
    const_cmd->add_flag("--minimize", const_minimize, "also report the minimizer of K");
    const_cmd->add_flag("--table", const_table, "also report a K(theta, eta) grid");
    const_cmd->callback([&] {
        Json j;
        j["schema_version"] = kSchemaVersion;
        j["artifact_version"] = kArtifactVersion;
        j["theta"] = const_theta;
        j["eta"] = const_eta;
        j["a_theta"] = constants::a_theta(const_theta);
        j["k_value"] = constants::k_constant(const_theta, const_eta);
        j["eta_cubic_residual"] = constants::eta_stationarity_residual(const_theta, const_eta);
        if (const_cr)
            j["c_value"] = constants::c_constant(const_theta, const_eta, *const_cr);
        if (const_minimize) {
            const auto m = constants::minimize_k();
            Json mj;
            mj["theta"] = m.theta;
            mj["eta"] = m.eta;
            mj["k_star"] = m.k;
            mj["residual"] = constants::eta_stationarity_residual(m.theta, m.eta);
            j["minimizer"] = mj;
        }
        if (const_table) {
            Json rows = Json::array();
            for (double th : {1.25, 1.5, 2.0, 2.5, 3.0, 4.0})
                for (double et : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
                    Json r;
                    r["theta"] = th;
                    r["eta"] = et;
                    r["k"] = constants::k_constant(th, et);
                    rows.push_back(r);
                }
            j["table"] = rows;
        }
        out << j.dump(2) << "\n";
    });

    // ---- pivot-sim --------------------------------------------------------
    auto* sim_cmd = app.add_subcommand("pivot-sim", "abstract tail experiment");
    std::string sim_process = "poisson", sim_out, sim_svg;
    double sim_s = 8.0, sim_theta = 2.0, sim_eta = 1.0, sim_window = 0.0;
    std::int64_t sim_trials = 100000;
    std::uint64_t sim_seed = 1ULL;
    bool sim_override = false;
    sim_cmd->add_option("--process", sim_process, "poisson | staircase")
        ->check(CLI::IsMember({"poisson", "staircase"}));
    sim_cmd->add_option("--s", sim_s, "pivot volume");
    sim_cmd->add_option("--theta", sim_theta, "grid ratio (> 1)");
    sim_cmd->add_option("--eta", sim_eta, "count slack (> 0)");
    sim_cmd->add_option("--trials", sim_trials, "paths to draw");
    sim_cmd->add_option("--window", sim_window, "path window; default covers the grid");
    sim_cmd->add_option("--seed", sim_seed, "master seed");
    sim_cmd->add_flag("--override-window", sim_override, "allow a truncated window");
    sim_cmd->add_option("--out", sim_out, "write the report JSON here too");
    sim_cmd->add_option("--svg", sim_svg, "write a one-point tail chart");
    sim_cmd->callback([&] {
        const double window =
            sim_window > 0.0
                ? sim_window
                : sim_s * std::pow(sim_theta, std::ceil(std::log(64.0) / std::log(sim_theta)));
        const TailReport rep = abstract_tail_experiment(
            sim_process == "poisson" ? ProcessKind::poisson : ProcessKind::staircase, sim_s,
            sim_theta, sim_eta, sim_trials, window, sim_seed, resolve_threads(), sim_override);
        const Json j = tail_report_json(rep);
        out << j.dump(2) << "\n";
        if (!sim_out.empty()) write_text_file(sim_out, j.dump(2) + "\n");
        if (!sim_svg.empty()) {
            std::vector<svg::TailPoint> pts{{rep.threshold, rep.p_hat, rep.ci95.lo, rep.ci95.hi,
                                             std::min(1.0, rep.envelope)}};
            write_text_file(sim_svg, svg::render_tail_svg(pts, "abstract tail"));
        }
    });

    // ---- experiment -------------------------------------------------------
    auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo experiments on sampled lattices");
    std::string exp_kind;
    ExperimentFlags flags;
    exp_cmd
        ->add_option("kind", exp_kind,
                     "mean | variance | gamma-tail | vlambda-tail | pivot | moments | sweep")
        ->required()
        ->check(CLI::IsMember(
            {"mean", "variance", "gamma-tail", "vlambda-tail", "pivot", "moments", "sweep"}));
    exp_cmd->add_option("--config", flags.config_path, "flat key = value config file");
    exp_cmd->add_flag("--svg", flags.emit_svg, "emit SVG charts for tail tables");
    add_override(exp_cmd, flags, "--n", "n", "dimension");
    add_override(exp_cmd, flags, "--p", "p", "prime modulus");
    add_override(exp_cmd, flags, "--seed", "seed", "master seed");
    add_override(exp_cmd, flags, "--trials", "trials", "trial count");
    add_override(exp_cmd, flags, "--r-window", "r_window", "window radius ratio");
    add_override(exp_cmd, flags, "--volumes", "volumes", "comma list of volumes");
    add_override(exp_cmd, flags, "--thresholds", "thresholds", "comma list of thresholds");
    add_override(exp_cmd, flags, "--pivot-s", "pivot_s", "pivot volume s");
    add_override(exp_cmd, flags, "--pivot-theta", "pivot_theta", "pivot grid ratio");
    add_override(exp_cmd, flags, "--pivot-eta", "pivot_eta", "pivot slack");
    add_override(exp_cmd, flags, "--j-max", "j_max", "pivot grid depth");
    add_override(exp_cmd, flags, "--moment-p", "moment_p", "fractional moment exponent");
    add_override(exp_cmd, flags, "--truncation-a", "truncation_a", "truncated moment level");
    add_override(exp_cmd, flags, "--n-list", "n_list", "comma list of sweep dimensions");
    add_override(exp_cmd, flags, "--out", "output", "output path prefix");
    add_override(exp_cmd, flags, "--scale-check-every", "scale_check_every",
                 "scale-invariance subsample stride");
    add_override(exp_cmd, flags, "--max-vectors", "max_vectors", "enumeration vector budget");
    add_override(exp_cmd, flags, "--max-nodes", "max_nodes", "enumeration node budget");
    exp_cmd->callback([&] {
        ExperimentConfig cfg = assemble_config(flags);
        const std::string prefix = cfg.output_path.empty() ? "run" : cfg.output_path;
        bundle_prefix = prefix;
        const int threads = resolve_threads();
        if (exp_kind == "mean" || exp_kind == "variance") {
            auto rep = siegel_rogers_check(cfg, threads);
            Json j = rep.to_json();
            j["experiment"] = exp_kind == "mean" ? "siegel_mean" : "rogers_variance";
            write_artifacts(prefix, j, {{"siegel_rogers.csv", rep.csv()}}, out);
        } else if (exp_kind == "gamma-tail") {
            auto rep = gamma_tail_experiment(cfg, threads);
            write_artifacts(prefix, rep.to_json(), rep.csv_tables(), out);
            if (flags.emit_svg)
                write_text_file(prefix + "_gamma_tail.svg",
                                svg::render_tail_svg(tail_points(rep.gamma_table), "gamma tail"));
        } else if (exp_kind == "vlambda-tail") {
            auto rep = v_lambda_tail_experiment(cfg, threads);
            write_artifacts(prefix, rep.to_json(), {{"vlambda_tail.csv", rep.csv()}}, out);
            if (flags.emit_svg) {
                std::vector<svg::TailPoint> pts;
                for (const auto& r : rep.rows) {
                    const double p = rep.trials_ok > 0
                                         ? static_cast<double>(r.exceed) / rep.trials_ok
                                         : 0.0;
                    const auto iv = stats::wilson_interval(
                        r.exceed, std::max<std::int64_t>(rep.trials_ok, 1));
                    pts.push_back({r.s, p, iv.lo, iv.hi, std::min(1.0, rep.c_fit / r.s)});
                }
                write_text_file(prefix + "_vlambda_tail.svg",
                                svg::render_tail_svg(pts, "V_lambda tail"));
            }
        } else if (exp_kind == "pivot") {
            auto rep = pivot_frequency_experiment(cfg, threads);
            write_artifacts(prefix, rep.to_json(), {{"pivot_frequency.csv", rep.csv()}}, out);
        } else if (exp_kind == "moments") {
            auto rep = moment_experiment(cfg, threads);
            write_artifacts(prefix, rep.to_json(), {{"moments.csv", rep.csv()}}, out);
        } else {
            auto rep = product_model_sweep(cfg, threads);
            write_artifacts(prefix, rep.to_json(), {{"sweep.csv", rep.csv()}}, out);
        }
    });

    // ---- parse and dispatch ------------------------------------------------
    std::vector<const char*> argv;
    argv.push_back("latprof");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        return 0;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const FirewallViolation& fv) {
        const std::string path = (bundle_prefix.empty() ? std::string("firewall_bundle")
                                                        : bundle_prefix + "_firewall") +
                                 ".json";
        Json bundle;
        bundle["check"] = fv.check;
        bundle["trial_index"] = fv.trial_index;
        const Json cfg_echo = Json::parse(fv.config_echo, nullptr, false);
        if (cfg_echo.is_discarded())
            bundle["config"] = fv.config_echo;
        else
            bundle["config"] = cfg_echo;
        try {
            write_text_file(path, bundle.dump(2) + "\n");
            err << fv.what() << "; reproduction bundle: " << path << "\n";
        } catch (const std::exception&) {
            err << fv.what() << "; bundle could not be written\n";
        }
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace latprof
