#include "latprof/pivotlab.hpp"

#include <algorithm>
#include <cmath>

#include "latprof/parallel.hpp"
#include "latprof/rng.hpp"

namespace latprof {

namespace {
constexpr double kGuard = 1e-9;
// Keeps Poisson draws on a stream disjoint from the lattice sampler's.
constexpr std::uint64_t kPoissonSalt = 0x706F697373ULL;
}  // namespace

CountingPath poisson_path(double window, std::uint64_t master_seed, std::uint64_t trial_index) {
    if (!(window > 0.0)) throw ConfigError("poisson_path needs window > 0");
    CounterRng rng(master_seed ^ kPoissonSalt, trial_index);
    CountingPath path;
    path.window = window;
    double t = 0.0;
    for (;;) {
        t += rng.next_exponential();
        if (t > window) break;
        path.jump_volumes.push_back(t);
        path.increments.push_back(1);
    }
    return path;
}

CountingPath staircase_path(double window) {
    if (!(window >= 1.0)) throw ConfigError("staircase_path needs window >= 1");
    CountingPath path;
    path.window = window;
    for (std::int64_t k = 1; k <= static_cast<std::int64_t>(window); ++k) {
        path.jump_volumes.push_back(static_cast<double>(k));
        path.increments.push_back(1);
    }
    return path;
}

CountingPath lattice_path(const CountProfile& p) {
    if (p.empty()) throw NoVectorsError{};
    CountingPath path;
    path.window = p.window_volume;
    path.jump_volumes = p.vol;
    path.increments.reserve(p.cum.size());
    std::int64_t prev = 0;
    for (std::int64_t c : p.cum) {
        path.increments.push_back(c - prev);
        prev = c;
    }
    return path;
}

std::int64_t path_count_at(const CountingPath& path, double v) {
    if (v < 0.0) throw ConfigError("volume must be nonnegative");
    if (v > path.window * (1.0 + kGuard))
        throw WindowExceededError("window exceeded: path count beyond window");
    const double cap = v * (1.0 + kGuard) + 1e-300;
    std::int64_t m = 0;
    for (std::size_t i = 0; i < path.jump_volumes.size() && path.jump_volumes[i] <= cap; ++i)
        m += path.increments[i];
    return m;
}

PivotStats pivot_abs(const CountingPath& path) {
    PivotStats st;
    st.window = path.window;
    if (path.jump_volumes.empty()) return st;
    st.has_jump = true;
    st.v_star = path.jump_volumes.front();
    std::int64_t cum = 0;
    double g = 0.0;
    for (std::size_t i = 0; i < path.jump_volumes.size(); ++i) {
        if (path.jump_volumes[i] > path.window * (1.0 + kGuard)) break;
        cum += path.increments[i];
        g = std::max(g, static_cast<double>(cum) * st.v_star / path.jump_volumes[i]);
    }
    st.gamma_abs = g;
    return st;
}

PathMembership path_pivot_membership(const CountingPath& path, double s, double theta,
                                     double eta, long j_max) {
    if (!(s > 0.0) || !(theta > 1.0) || !(eta > 0.0))
        throw ConfigError("pivot parameters need s > 0, theta > 1, eta > 0");
    PathMembership out;
    out.member = true;
    if (path_count_at(path, s) == 0) {
        out.member = false;
        out.witnesses.push_back({-1, 0, 0.0});
    }
    for (long j = 0; j <= j_max; ++j) {
        const double vj = s * std::pow(theta, static_cast<double>(j));
        const std::int64_t mj = path_count_at(path, vj);
        const double bound = (1.0 + eta) * vj;
        if (static_cast<double>(mj) > bound * (1.0 + 1e-12)) {
            out.member = false;
            out.witnesses.push_back({j, mj, bound});
        }
    }
    return out;
}

TailReport abstract_tail_experiment(ProcessKind process, double s, double theta, double eta,
                                    std::int64_t trials, double window, std::uint64_t seed,
                                    int threads, bool override_window) {
    if (!(s > 0.0) || !(theta > 1.0) || !(eta > 0.0))
        throw ConfigError("pivot parameters need s > 0, theta > 1, eta > 0");
    if (trials < 1) throw ConfigError("trials must be positive");
    const double required = s * std::pow(theta, std::ceil(std::log(64.0) / std::log(theta)));
    TailReport rep;
    if (window < required) {
        if (!override_window)
            throw ConfigError("window below s * theta^ceil(log_theta 64); pass an explicit override");
        rep.window_truncated = true;
    }
    rep.process = process == ProcessKind::poisson ? "poisson" : "staircase";
    rep.s = s;
    rep.theta = theta;
    rep.eta = eta;
    rep.trials = trials;
    rep.window = window;
    rep.seed = seed;
    rep.threshold = theta * (1.0 + eta) * s;

    // Largest grid index inside the window; the pivot implication is
    // asserted exactly on every path for the grid it can see.
    const long j_max = static_cast<long>(
        std::floor(std::log(window / s) / std::log(theta) * (1.0 + 1e-12)));

    std::vector<std::uint8_t> exceed(static_cast<std::size_t>(trials), 0);
    std::vector<std::uint8_t> lemma_violation(static_cast<std::size_t>(trials), 0);
    run_trials(trials, threads, [&](std::int64_t i) {
        const CountingPath path = process == ProcessKind::poisson
                                      ? poisson_path(window, seed, static_cast<std::uint64_t>(i))
                                      : staircase_path(window);
        const PivotStats st = pivot_abs(path);
        const double g = st.has_jump ? st.gamma_abs : 0.0;
        if (g > rep.threshold) exceed[static_cast<std::size_t>(i)] = 1;
        if (j_max >= 0) {
            const PathMembership mem = path_pivot_membership(path, s, theta, eta, j_max);
            if (mem.member) {
                const double grid_top = s * std::pow(theta, static_cast<double>(j_max));
                double g_grid = 0.0;
                std::int64_t cum = 0;
                for (std::size_t k = 0; k < path.jump_volumes.size(); ++k) {
                    if (path.jump_volumes[k] > grid_top * (1.0 + kGuard)) break;
                    cum += path.increments[k];
                    g_grid = std::max(g_grid, static_cast<double>(cum) * st.v_star /
                                                  path.jump_volumes[k]);
                }
                if (g_grid > rep.threshold * (1.0 + 1e-12))
                    lemma_violation[static_cast<std::size_t>(i)] = 1;
            }
        }
    });
    for (std::int64_t i = 0; i < trials; ++i) {
        if (lemma_violation[static_cast<std::size_t>(i)])
            throw FirewallViolation("abstract pivot lemma", i, rep.process);
        rep.exceed_count += exceed[static_cast<std::size_t>(i)];
    }
    rep.p_hat = static_cast<double>(rep.exceed_count) / static_cast<double>(trials);
    rep.ci95 = stats::wilson_interval(rep.exceed_count, trials);
    rep.envelope = (1.0 / s) * (1.0 + 1.0 / (eta * eta * (1.0 - 1.0 / theta)));
    rep.vacuous = rep.envelope >= 1.0;
    return rep;
}

}  // namespace latprof
