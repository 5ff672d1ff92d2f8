#include "latprof/profile.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "latprof/geometry.hpp"

namespace latprof {

namespace {

constexpr double kGuard = 1e-9;  // relative band, biased to the closed-ball side

// Largest index with vol[i] <= v (closed-ball inclusion guard), or -1.
std::ptrdiff_t last_jump_at_or_below(const CountProfile& p, double v) {
    const double cap = v * (1.0 + kGuard) + 1e-300;
    auto it = std::upper_bound(p.vol.begin(), p.vol.end(), cap);
    return static_cast<std::ptrdiff_t>(it - p.vol.begin()) - 1;
}

// (q_a / q_b)^{n/2} through the canonical rational, so that integer lattice
// rescaling reproduces identical doubles.
double ratio_pow_half_n(const BigInt& q_a, const BigInt& q_b, int n) {
    mpq_class rat(q_a, q_b);
    rat.canonicalize();
    return std::pow(rat.get_d(), 0.5 * n);
}

}  // namespace

std::int64_t CountProfile::tau() const {
    if (q.empty()) throw NoVectorsError{};
    return cum.front();
}

double normalized_jump_volume(int n, const BigInt& det_abs, const BigInt& q) {
    if (q == 0) return 0.0;
    BigInt num;
    mpz_pow_ui(num.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(n));
    mpq_class rat(num, det_abs * det_abs);
    rat.canonicalize();
    return geometry::unit_ball_volume(n) * std::sqrt(rat.get_d());
}

BigInt q_for_volume(int n, const BigInt& det_abs, double v_norm) {
    if (v_norm <= 0.0) return BigInt(0);
    // q = (v * det / kappa_n)^{2/n}, then round up with an inclusion guard.
    const double log_det = std::log(det_abs.get_d());
    const double log_q =
        2.0 / n * (std::log(v_norm) + log_det - geometry::log_unit_ball_volume(n));
    const double q_d = std::ceil(std::exp(log_q) * (1.0 + kGuard));
    BigInt q;
    mpz_set_d(q.get_mpz_t(), q_d);
    while (normalized_jump_volume(n, det_abs, q) < v_norm) q += 1;
    return q;
}

CountProfile make_profile(const LatticeBasis& basis, const BigInt& q_window,
                          const EnumerationBudget& budget) {
    CountProfile p;
    p.n = basis.n;
    p.det_abs = basis.det_abs;
    p.q_window = q_window;
    const auto counts = enumerate_in_ball(basis, q_window, budget);
    p.q.reserve(counts.size());
    p.cum.reserve(counts.size());
    std::int64_t running = 0;
    for (const auto& nc : counts) {
        if (nc.count % 2 != 0)
            throw std::logic_error("parity violation: odd multiplicity in enumeration");
        running += nc.count;
        p.q.push_back(nc.q);
        p.cum.push_back(running);
        p.vol.push_back(normalized_jump_volume(p.n, p.det_abs, nc.q));
    }
    p.window_volume = normalized_jump_volume(p.n, p.det_abs, q_window);
    return p;
}

std::vector<std::pair<double, std::int64_t>> normalized_jump_volumes(const CountProfile& p) {
    if (p.empty()) throw NoVectorsError{};
    std::vector<std::pair<double, std::int64_t>> out;
    out.reserve(p.q.size());
    for (std::size_t i = 0; i < p.q.size(); ++i) out.emplace_back(p.vol[i], p.cum[i]);
    return out;
}

std::int64_t m_of_v(const CountProfile& p, double v) {
    if (v < 0.0) throw ConfigError("volume must be nonnegative");
    if (v > p.window_volume * (1.0 + kGuard))
        throw WindowExceededError("window exceeded: M(V) queried beyond the enumerated window");
    const auto i = last_jump_at_or_below(p, v);
    return i < 0 ? 0 : p.cum[static_cast<std::size_t>(i)];
}

GammaResult gamma(const CountProfile& p, double r_window, Convention convention) {
    if (!(r_window >= 1.0)) throw ConfigError("r_window must be >= 1");
    if (p.empty()) throw NoVectorsError{};
    const BigInt& q1 = p.q.front();
    const double q_need = r_window * r_window * q1.get_d();
    if (p.q_window.get_d() < q_need * (1.0 - kGuard))
        throw WindowExceededError("window exceeded: profile not complete up to r_window^2 * q1");

    const double q_cap = q_need * (1.0 + kGuard);
    double g = 0.0;
    for (std::size_t i = 0; i < p.q.size(); ++i) {
        if (p.q[i].get_d() > q_cap) break;
        const double gi = static_cast<double>(p.cum[i]) * ratio_pow_half_n(q1, p.q[i], p.n);
        g = std::max(g, gi);
    }

    GammaResult res;
    res.v_lambda = p.vol.front();
    res.tau = p.cum.front();
    res.r_window = r_window;
    res.convention = convention;
    const double envelope = res.v_lambda * std::pow(1.0 + 0.5 / r_window, p.n);
    res.gamma_window = g;
    res.gamma_upper = std::max(g, envelope);
    res.certified = envelope <= g;
    if (convention == Convention::unoriented) {
        res.gamma_window /= 2.0;
        res.gamma_upper /= 2.0;
        res.tau /= 2;
    }
    res.beta = std::pow(res.gamma_window, 1.0 / p.n);
    res.b = std::log2(res.gamma_window) / p.n;
    return res;
}

double packing_tail_bound(const CountProfile& p, double r_from) {
    if (p.empty()) throw NoVectorsError{};
    if (!(r_from >= 1.0)) throw ConfigError("r_from must be >= 1");
    return p.vol.front() * std::pow(1.0 + 0.5 / r_from, p.n);
}

std::vector<std::pair<double, double>> profile_curve(const CountProfile& p) {
    if (p.empty()) throw NoVectorsError{};
    std::vector<std::pair<double, double>> out;
    out.reserve(p.q.size());
    const BigInt& q1 = p.q.front();
    for (std::size_t i = 0; i < p.q.size(); ++i)
        out.emplace_back(p.vol[i],
                         static_cast<double>(p.cum[i]) * ratio_pow_half_n(q1, p.q[i], p.n));
    return out;
}

double shell_gamma(const CountProfile& p, double r1, double r2) {
    if (!(r1 >= 1.0) || !(r2 >= r1)) throw ConfigError("need 1 <= r1 <= r2");
    if (p.empty()) throw NoVectorsError{};
    const BigInt& q1 = p.q.front();
    if (p.q_window.get_d() < r2 * r2 * q1.get_d() * (1.0 - kGuard))
        throw WindowExceededError("window exceeded: shell not covered");

    // Left endpoint: M is constant just past the last jump below the shell.
    const double v_lambda = p.vol.front();
    const double v_lo = std::pow(r1, p.n) * v_lambda;
    double best = static_cast<double>(m_of_v(p, v_lo)) / std::pow(r1, p.n);

    const double q_lo = r1 * r1 * q1.get_d() * (1.0 - kGuard);
    const double q_hi = r2 * r2 * q1.get_d() * (1.0 + kGuard);
    for (std::size_t i = 0; i < p.q.size(); ++i) {
        const double qd = p.q[i].get_d();
        if (qd < q_lo) continue;
        if (qd > q_hi) break;
        best = std::max(best,
                        static_cast<double>(p.cum[i]) * ratio_pow_half_n(q1, p.q[i], p.n));
    }
    return best;
}

double gamma_up_to_volume(const CountProfile& p, double v_max) {
    if (p.empty()) throw NoVectorsError{};
    if (v_max > p.window_volume * (1.0 + kGuard))
        throw WindowExceededError("window exceeded: gamma_up_to_volume beyond profile");
    const BigInt& q1 = p.q.front();
    double g = 0.0;
    const double cap = v_max * (1.0 + kGuard);
    for (std::size_t i = 0; i < p.q.size(); ++i) {
        if (p.vol[i] > cap) break;
        g = std::max(g, static_cast<double>(p.cum[i]) * ratio_pow_half_n(q1, p.q[i], p.n));
    }
    return g;
}

PivotMembership pivot_event_membership(const CountProfile& p, const PivotParams& params,
                                       long j_max) {
    if (!(params.s > 0.0) || !(params.theta > 1.0) || !(params.eta > 0.0))
        throw ConfigError("pivot parameters need s > 0, theta > 1, eta > 0");
    if (j_max < 0) throw ConfigError("j_max must be nonnegative");
    const double top = params.s * std::pow(params.theta, static_cast<double>(j_max));
    if (top > p.window_volume * (1.0 + kGuard))
        throw WindowExceededError("window exceeded: pivot grid beyond the enumerated window");

    PivotMembership out;
    out.member = true;
    if (m_of_v(p, params.s) == 0) {
        out.member = false;
        out.witnesses.push_back({-1, 0, 0.0});
    }
    for (long j = 0; j <= j_max; ++j) {
        const double vj = params.s * std::pow(params.theta, static_cast<double>(j));
        const std::int64_t mj = m_of_v(p, vj);
        const double bound = (1.0 + params.eta) * vj;
        if (static_cast<double>(mj) > bound * (1.0 + 1e-12)) {
            out.member = false;
            out.witnesses.push_back({j, mj, bound});
        }
    }
    return out;
}

long grid_size(double theta, double r, int n) {
    if (!(theta > 1.0)) throw ConfigError("theta must exceed 1");
    if (!(r >= 1.0)) throw ConfigError("r must be >= 1");
    if (n < 1) throw ConfigError("dimension must be >= 1");
    const double x = n * std::log(r) / std::log(theta);
    long j = static_cast<long>(std::ceil(x - 1e-9));
    if (j < 0) j = 0;
    // Recheck the ceiling; exact in integers when both inputs are integral.
    const double ti = std::nearbyint(theta);
    const double ri = std::nearbyint(r);
    if (theta == ti && r == ri && ti >= 2.0) {
        BigInt lhs, rhs;
        mpz_ui_pow_ui(lhs.get_mpz_t(), static_cast<unsigned long>(ti),
                      static_cast<unsigned long>(j));
        mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(ri),
                      static_cast<unsigned long>(n));
        while (lhs < rhs) {
            lhs *= static_cast<unsigned long>(ti);
            ++j;
        }
        while (j > 0 && lhs >= rhs * static_cast<unsigned long>(ti)) {
            mpz_divexact_ui(lhs.get_mpz_t(), lhs.get_mpz_t(), static_cast<unsigned long>(ti));
            --j;
        }
    } else if (std::pow(theta, static_cast<double>(j)) <
               std::pow(r, static_cast<double>(n)) * (1.0 - 1e-12)) {
        ++j;
    }
    return j;
}

void write_profile_csv(std::ostream& out, const CountProfile& p) {
    out << "q,norm,V_normalized,M,G\n";
    if (p.empty()) return;
    const auto curve = profile_curve(p);
    for (std::size_t i = 0; i < p.q.size(); ++i) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), ",%.12g,%.12g,%lld,%.12g\n", std::sqrt(p.q[i].get_d()),
                      p.vol[i], static_cast<long long>(p.cum[i]), curve[i].second);
        out << p.q[i].get_str() << buf;
    }
}

}  // namespace latprof
