#pragma once

#include <optional>

namespace latprof::constants {

// A_theta = theta / (theta - 1) = (1 - 1/theta)^{-1}.
double a_theta(double theta);

// K(theta, eta) = theta (1 + eta) (1 + 1/(eta^2 (1 - 1/theta))).
// The tail constant in front of C_R/T once T = theta (1+eta) s.
double k_constant(double theta, double eta);

// C(theta, eta) = c_r * K(theta, eta).
double c_constant(double theta, double eta, double c_r);

// (c_r/s) (1 + sum_{j=0}^{j_max} theta^{-j} / eta^2); the infinite grid when
// j_max is absent.
double pivot_failure_envelope(double s, double theta, double eta, double c_r,
                              std::optional<long> j_max = std::nullopt);

// eta^3 - A_theta (eta + 2); a root is stationary for K_theta(eta).
double eta_stationarity_residual(double theta, double eta);

// Unique positive root of the stationarity cubic, by bisection.
double solve_eta_cubic(double theta);

struct KMinimum {
    double theta = 0.0;
    double eta = 0.0;
    double k = 0.0;
};

// Two-level minimization: coarse theta grid on (1, 4], the cubic solved per
// theta, then golden-section refinement of theta to 1e-9.  Deterministic.
KMinimum minimize_k();

}  // namespace latprof::constants
