#include "latprof/constants.hpp"

#include <cmath>

#include "latprof/errors.hpp"

namespace latprof::constants {

namespace {
void require_params(double theta, double eta) {
    if (!(theta > 1.0)) throw ConfigError("theta must exceed 1");
    if (!(eta > 0.0)) throw ConfigError("eta must be positive");
}
}  // namespace

double a_theta(double theta) {
    if (!(theta > 1.0)) throw ConfigError("theta must exceed 1");
    return theta / (theta - 1.0);
}

double k_constant(double theta, double eta) {
    require_params(theta, eta);
    return theta * (1.0 + eta) * (1.0 + a_theta(theta) / (eta * eta));
}

double c_constant(double theta, double eta, double c_r) {
    if (!(c_r > 0.0)) throw ConfigError("c_r must be positive");
    return c_r * k_constant(theta, eta);
}

double pivot_failure_envelope(double s, double theta, double eta, double c_r,
                              std::optional<long> j_max) {
    if (!(s > 0.0)) throw ConfigError("s must be positive");
    require_params(theta, eta);
    if (!(c_r > 0.0)) throw ConfigError("c_r must be positive");
    double grid_sum;
    if (!j_max.has_value()) {
        grid_sum = 1.0 / (1.0 - 1.0 / theta);
    } else {
        if (*j_max < 0) throw ConfigError("j_max must be nonnegative");
        grid_sum = (1.0 - std::pow(theta, -static_cast<double>(*j_max + 1))) /
                   (1.0 - 1.0 / theta);
    }
    return (c_r / s) * (1.0 + grid_sum / (eta * eta));
}

double eta_stationarity_residual(double theta, double eta) {
    require_params(theta, eta);
    return eta * eta * eta - a_theta(theta) * (eta + 2.0);
}

double solve_eta_cubic(double theta) {
    const double a = a_theta(theta);
    double lo = std::cbrt(a);             // residual < 0 here
    double hi = std::cbrt(3.0 * a) + 2.0; // residual > 0 here
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (eta_stationarity_residual(theta, mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

KMinimum minimize_k() {
    auto value = [](double theta) { return k_constant(theta, solve_eta_cubic(theta)); };

    // Coarse bracket on (1, 4].
    double best_theta = 2.0;
    double best_k = value(2.0);
    const int grid = 300;
    for (int i = 1; i <= grid; ++i) {
        const double theta = 1.0 + 3.0 * static_cast<double>(i) / grid;
        const double k = value(theta);
        if (k < best_k) {
            best_k = k;
            best_theta = theta;
        }
    }
    double lo = std::max(1.0 + 1e-6, best_theta - 3.0 / grid);
    double hi = std::min(4.0, best_theta + 3.0 / grid);

    // Golden-section refinement.
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = value(x1);
    double f2 = value(x2);
    while (hi - lo > 1e-9) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = value(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = value(x2);
        }
    }
    KMinimum out;
    out.theta = 0.5 * (lo + hi);
    out.eta = solve_eta_cubic(out.theta);
    out.k = k_constant(out.theta, out.eta);
    return out;
}

}  // namespace latprof::constants
