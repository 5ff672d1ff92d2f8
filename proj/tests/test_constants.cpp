#include "latprof/constants.hpp"

#include <cmath>

#include "doctest.h"
#include "latprof/errors.hpp"

using namespace latprof;
namespace cst = latprof::constants;

TEST_CASE("tail constant K") {
    CHECK(cst::k_constant(2.0, 1.0) == 12.0);  // the theta = 2, eta = 1 value
    CHECK(cst::k_constant(2.0, 2.0) == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(cst::k_constant(3.0, 1.0) == doctest::Approx(15.0).epsilon(1e-14));
    CHECK(cst::a_theta(2.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(cst::a_theta(1.5) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK_THROWS_AS(cst::k_constant(1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(cst::k_constant(2.0, 0.0), ConfigError);
}

TEST_CASE("pivot failure envelope") {
    CHECK(cst::pivot_failure_envelope(8.0, 2.0, 1.0, 1.0) == doctest::Approx(0.375).epsilon(1e-14));
    // Single grid point: (c/s)(1 + 1/eta^2).
    CHECK(cst::pivot_failure_envelope(8.0, 2.0, 1.0, 1.0, 0L) ==
          doctest::Approx((1.0 / 8.0) * 2.0).epsilon(1e-14));
    // Finite grids increase toward the infinite envelope.
    double prev = 0.0;
    for (long j : {0L, 1L, 3L, 10L, 40L}) {
        const double e = cst::pivot_failure_envelope(4.0, 2.0, 0.5, 1.0, j);
        CHECK(e >= prev);
        prev = e;
    }
    CHECK(prev <= cst::pivot_failure_envelope(4.0, 2.0, 0.5, 1.0));
}

TEST_CASE("envelope and K agree through T = theta (1+eta) s") {
    for (double theta : {1.5, 2.0, 3.0})
        for (double eta : {0.5, 1.0, 2.0})
            for (double s : {1.0, 8.0})
                for (double c_r : {1.0, 2.5}) {
                    const double lhs = theta * (1.0 + eta) *
                                       cst::pivot_failure_envelope(s, theta, eta, c_r) * s;
                    const double rhs = c_r * cst::k_constant(theta, eta);
                    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
                }
}

TEST_CASE("stationarity cubic") {
    CHECK(cst::eta_stationarity_residual(2.0, 2.0) == 0.0);  // exact root
    CHECK(cst::eta_stationarity_residual(2.0, 1.0) == doctest::Approx(-5.0).epsilon(1e-14));
    // Sign change bracket used by the solver.
    for (double theta : {1.2, 1.5, 2.0, 3.0, 4.0}) {
        const double a = cst::a_theta(theta);
        CHECK(cst::eta_stationarity_residual(theta, std::cbrt(a)) < 0.0);
        CHECK(cst::eta_stationarity_residual(theta, std::cbrt(3.0 * a) + 2.0) > 0.0);
        const double root = cst::solve_eta_cubic(theta);
        CHECK(std::abs(cst::eta_stationarity_residual(theta, root)) <= 1e-12);
    }
    CHECK(cst::solve_eta_cubic(2.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("minimizer of K") {
    const auto m = cst::minimize_k();
    CHECK(m.k <= 9.0);   // K(2,2) = 9 is feasible
    CHECK(m.k <= 12.0);  // and so is K(2,1) = 12
    CHECK(m.theta > 1.0);
    CHECK(m.theta < 2.0);
    CHECK(std::abs(cst::eta_stationarity_residual(m.theta, m.eta)) <= 1e-9);
    // Deterministic, bit for bit.
    const auto m2 = cst::minimize_k();
    CHECK(m.theta == m2.theta);
    CHECK(m.eta == m2.eta);
    CHECK(m.k == m2.k);
    // No grid point beats the reported minimum.
    for (int i = 1; i <= 60; ++i) {
        const double theta = 1.0 + 3.0 * i / 60.0;
        CHECK(cst::k_constant(theta, cst::solve_eta_cubic(theta)) >= m.k - 1e-9);
    }
}
