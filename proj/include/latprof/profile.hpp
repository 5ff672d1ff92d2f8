#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "latprof/lattice.hpp"

namespace latprof {

// Jump structure of the volume-parametrized count M_L(V) of one lattice,
// complete up to the squared-norm truncation q_window (inclusive).  All
// volumes are covolume-normalized: V_i = kappa_n * q_i^{n/2} / det_abs.
struct CountProfile {
    int n = 0;
    BigInt det_abs;
    BigInt q_window;
    std::vector<BigInt> q;             // distinct squared norms, increasing
    std::vector<std::int64_t> cum;     // cumulative oriented counts
    std::vector<double> vol;           // normalized jump volumes
    double window_volume = 0.0;        // normalized volume at q_window

    bool empty() const { return q.empty(); }
    std::int64_t tau() const;          // count at the first jump
};

// Normalized volume of the ball of exact squared radius q.  Evaluated
// through the canonical rational q^n / det^2, so integer rescaling of the
// lattice reproduces bit-identical doubles.
double normalized_jump_volume(int n, const BigInt& det_abs, const BigInt& q);

// Smallest integer squared-norm threshold whose normalized ball volume
// reaches v_norm (guarded toward inclusion).
BigInt q_for_volume(int n, const BigInt& det_abs, double v_norm);

// Enumerates the lattice up to q_window and packages the jump list.
CountProfile make_profile(const LatticeBasis& basis, const BigInt& q_window,
                          const EnumerationBudget& budget = {});

std::vector<std::pair<double, std::int64_t>> normalized_jump_volumes(const CountProfile& p);

// M_L(V) with the closed-ball convention; never extrapolates past the window.
std::int64_t m_of_v(const CountProfile& p, double v);

enum class Convention { oriented, unoriented };

struct GammaResult {
    double gamma_window = 0.0;   // sup of G over jump volumes within r_window
    double gamma_upper = 0.0;    // max(gamma_window, packing tail envelope)
    bool certified = false;      // envelope closed the gap: gamma == gamma_window
    double v_lambda = 0.0;       // normalized shortest-vector volume
    std::int64_t tau = 0;
    double beta = 0.0;           // gamma_window^{1/n}
    double b = 0.0;              // log2(beta)
    double r_window = 0.0;
    Convention convention = Convention::oriented;
};

GammaResult gamma(const CountProfile& p, double r_window,
                  Convention convention = Convention::oriented);

// Envelope for sup_{V >= V0} G_L(V) with V0 = r_from^n * V_lambda:
// V_lambda * (1 + 1/(2 r_from))^n, decreasing in r_from with limit V_lambda.
double packing_tail_bound(const CountProfile& p, double r_from);

// (V_i, G_L(V_i)) at every jump in the window.
std::vector<std::pair<double, double>> profile_curve(const CountProfile& p);

// sup of N_L(r lambda_1)/r^n over r in [r1, r2].
double shell_gamma(const CountProfile& p, double r1, double r2);

// sup of G over jump volumes <= v_max; used by grid-based pivot checks.
double gamma_up_to_volume(const CountProfile& p, double v_max);

struct PivotParams {
    double s = 8.0;
    double theta = 2.0;
    double eta = 1.0;
};

struct PivotWitness {
    long j = 0;          // violated grid index; -1 encodes M(s) = 0
    std::int64_t m = 0;  // observed count
    double bound = 0.0;  // (1+eta) theta^j s
};

struct PivotMembership {
    bool member = false;
    std::vector<PivotWitness> witnesses;
};

// M(s) > 0 and M(theta^j s) <= (1+eta) theta^j s for 0 <= j <= j_max.
PivotMembership pivot_event_membership(const CountProfile& p, const PivotParams& params,
                                       long j_max);

// J_R = max{0, ceil(log_theta R^n)} with a defensive ceiling.
long grid_size(double theta, double r, int n);

// CSV columns: q, norm, V_normalized, M, G.
void write_profile_csv(std::ostream& out, const CountProfile& p);

}  // namespace latprof
