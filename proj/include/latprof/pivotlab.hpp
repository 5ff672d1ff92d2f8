#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latprof/profile.hpp"
#include "latprof/stats.hpp"

namespace latprof {

// A monotone right-continuous counting path on (0, window], recorded by its
// jump locations and increments.
struct CountingPath {
    std::vector<double> jump_volumes;      // increasing
    std::vector<std::int64_t> increments;  // positive
    double window = 0.0;
};

// Unit-rate Poisson arrivals via exponential spacings: E M(V) = V and
// Var M(V) = V, the C0 = 1 reference process.
CountingPath poisson_path(double window, std::uint64_t master_seed, std::uint64_t trial_index);

// Unit jumps at 1, 2, 3, ...: M(V) = floor(V), the deterministic oracle.
CountingPath staircase_path(double window);

// The lattice specialization: jumps at the normalized jump volumes.
CountingPath lattice_path(const CountProfile& p);

// M(V) on a path, closed-ball convention.
std::int64_t path_count_at(const CountingPath& path, double v);

struct PivotStats {
    bool has_jump = false;
    double v_star = 0.0;    // first jump volume
    double gamma_abs = 0.0; // sup over jumps <= window of M(V) V*/V
    double window = 0.0;
};

PivotStats pivot_abs(const CountingPath& path);

struct PathMembership {
    bool member = false;
    std::vector<PivotWitness> witnesses;
};

PathMembership path_pivot_membership(const CountingPath& path, double s, double theta,
                                     double eta, long j_max);

enum class ProcessKind { poisson, staircase };

struct TailReport {
    std::string process;
    double s = 0.0, theta = 0.0, eta = 0.0;
    std::int64_t trials = 0;
    double window = 0.0;
    std::uint64_t seed = 0;
    double threshold = 0.0;       // theta (1+eta) s
    std::int64_t exceed_count = 0;
    double p_hat = 0.0;
    stats::Interval ci95;
    double envelope = 0.0;        // (C0/s)(1 + 1/(eta^2 (1 - 1/theta))), C0 = 1
    bool vacuous = false;         // envelope >= 1
    bool window_truncated = false;
};

// Monte Carlo exceedance of Gamma over theta(1+eta)s.  Every generated path
// is also checked against the pivot implication exactly; a violation throws.
// The window precondition window >= s * theta^{ceil(log_theta 64)} can be
// waived with override_window, which flags the report as truncated.
TailReport abstract_tail_experiment(ProcessKind process, double s, double theta, double eta,
                                    std::int64_t trials, double window, std::uint64_t seed,
                                    int threads, bool override_window = false);

}  // namespace latprof
