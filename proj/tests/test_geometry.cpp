#include "latprof/geometry.hpp"

#include <cmath>

#include "doctest.h"
#include "latprof/errors.hpp"
#include "oracles.hpp"

using namespace latprof;
namespace geo = latprof::geometry;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("unit ball volumes in small dimensions") {
    CHECK(geo::unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(geo::unit_ball_volume(2) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(geo::unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(geo::unit_ball_volume(0), ConfigError);
}

TEST_CASE("log-space evaluation survives large n") {
    // kappa_n underflows long before n = 2000; the log stays finite.
    CHECK(std::isfinite(geo::log_unit_ball_volume(2000)));
    CHECK(geo::unit_ball_volume(400) > 0.0);
}

TEST_CASE("radius_of_volume examples and errors") {
    CHECK(geo::radius_of_volume(2, kPi) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(geo::radius_of_volume(5, 0.0) == 0.0);
    // (n=3, v = 32 pi / 3) -> 2, cross-checked by bisection on the forward map.
    const double v = 32.0 * kPi / 3.0;
    CHECK(geo::radius_of_volume(3, v) == doctest::Approx(2.0).epsilon(1e-12));
    const double r_bisect = oracles::bisect_radius(3, v, &geo::volume_of_radius);
    CHECK(geo::radius_of_volume(3, v) == doctest::Approx(r_bisect).epsilon(1e-10));
    CHECK_THROWS_AS(geo::radius_of_volume(3, -1.0), ConfigError);
}

TEST_CASE("volume_of_radius examples") {
    CHECK(geo::volume_of_radius(2, 1.0) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(geo::volume_of_radius(4, 0.0) == 0.0);
    // kappa_8 = pi^4 / 24 evaluated independently.
    const double kappa8 = std::pow(kPi, 4) / 24.0;
    CHECK(geo::volume_of_radius(8, 2.0) == doctest::Approx(kappa8 * 256.0).epsilon(1e-12));
    CHECK_THROWS_AS(geo::volume_of_radius(2, -0.5), ConfigError);
}

TEST_CASE("stirling scale") {
    const double two_pi_e = 2.0 * kPi * std::exp(1.0);
    CHECK(geo::stirling_scale(17) == doctest::Approx(std::sqrt(17.0 / two_pi_e)).epsilon(1e-14));
    CHECK(geo::stirling_scale(1) == doctest::Approx(std::sqrt(1.0 / two_pi_e)).epsilon(1e-14));
    // kappa_n^{-1/n} agrees with the Stirling scale up to 1 + O(log n / n).
    for (int n = 8; n <= 64; ++n) {
        const double lhs = std::exp(-geo::log_unit_ball_volume(n) / n);
        const double ratio = lhs / geo::stirling_scale(n);
        CHECK(std::abs(ratio - 1.0) <= 10.0 * std::log(static_cast<double>(n)) / n);
    }
}

TEST_CASE("round trip and monotonicity") {
    for (int n = 1; n <= 64; ++n) {
        for (int k = -3; k <= 3; ++k) {
            const double v = std::pow(10.0, k);
            const double back = geo::volume_of_radius(n, geo::radius_of_volume(n, v));
            CHECK(std::abs(back - v) <= 1e-10 * v);
        }
        double prev = -1.0;
        for (double v : {0.001, 0.3, 1.0, 7.0, 1234.5}) {
            const double r = geo::radius_of_volume(n, v);
            CHECK(r > prev);
            prev = r;
        }
    }
}

TEST_CASE("dimension factor cancels in radius ratios") {
    for (int n : {2, 3, 8, 17, 33, 64}) {
        for (double v : {0.5, 2.0, 64.0}) {
            for (double w : {1.0, 3.0, 700.0}) {
                const double lhs =
                    std::pow(geo::radius_of_volume(n, v) / geo::radius_of_volume(n, w), n);
                CHECK(std::abs(lhs - v / w) <= 1e-10 * (v / w));
            }
        }
    }
}
