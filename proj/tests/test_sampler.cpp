#include "latprof/sampler.hpp"

#include <cmath>

#include "doctest.h"
#include "latprof/profile.hpp"
#include "latprof/stats.hpp"

using namespace latprof;

namespace {
bool trial_division_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}
}  // namespace

TEST_CASE("primality against trial division") {
    for (std::uint64_t p = 2; p < 2000; ++p) CHECK(is_prime_u64(p) == trial_division_prime(p));
    CHECK(is_prime_u64(10007));
    CHECK(!is_prime_u64(10006));
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(1000003));
    CHECK(!is_prime_u64(1000001));                 // 101 * 9901
    CHECK(is_prime_u64(18446744073709551557ULL));  // largest 64-bit prime
    CHECK_THROWS_AS(is_prime_u64(1), ConfigError);
    CHECK_THROWS_AS(make_sampler_config(5, 10006, 0), ConfigError);
}

TEST_CASE("Goldstein-Mayer structure and determinism") {
    const auto cfg = make_sampler_config(5, 10007, 99);
    const auto a = sample_lattice(cfg, 0);
    const auto b = sample_lattice(cfg, 0);
    CHECK(a.rows == b.rows);  // identical (config, trial) gives identical bases
    CHECK(a.det_abs == 10007);
    CHECK(a.rows[0][0] == 10007);
    for (int i = 1; i < 5; ++i) {
        CHECK(a.rows[i][i] == 1);
        CHECK(a.rows[i][0] >= 0);
        CHECK(a.rows[i][0] < 10007);
        for (int j = 1; j < 5; ++j)
            if (j != i) CHECK(a.rows[i][j] == 0);
    }
    const auto c = sample_lattice(cfg, 1);
    CHECK(a.rows != c.rows);
}

TEST_CASE("normalized V_lambda is invariant under integer rescaling") {
    const auto cfg = make_sampler_config(4, 10007, 5);
    for (std::uint64_t t = 0; t < 5; ++t) {
        const auto basis = sample_lattice(cfg, t);
        const auto sv = shortest_vector(basis);
        const double v1 = normalized_jump_volume(4, basis.det_abs, sv.q);
        const auto scaled = scale_basis(basis, 2);
        const auto sv2 = shortest_vector(scaled);
        CHECK(sv2.q == sv.q * 4);
        CHECK(normalized_jump_volume(4, scaled.det_abs, sv2.q) == v1);
    }
}

TEST_CASE("sample mean of M at V = 4 sits near 4") {
    // 200 trials at p = 10007, n = 5: the mean must land within 3 standard
    // errors of the Siegel value 4.
    const auto cfg = make_sampler_config(5, 10007, 2718);
    std::vector<double> ms;
    for (std::uint64_t t = 0; t < 200; ++t) {
        const auto basis = sample_lattice(cfg, t);
        const auto prof = make_profile(basis, q_for_volume(5, basis.det_abs, 4.0));
        ms.push_back(static_cast<double>(m_of_v(prof, 4.0)));
    }
    const auto mv = stats::mean_variance(ms);
    CHECK(std::abs(mv.mean - 4.0) <= 3.0 * mv.se_mean);
}
