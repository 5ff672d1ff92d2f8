#include "latprof/geometry.hpp"

#include <cmath>

#include "latprof/errors.hpp"

namespace latprof::geometry {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.71828182845904523536;

void require_dimension(int n) {
    if (n < 1) throw ConfigError("dimension must be >= 1");
}
}  // namespace

double log_unit_ball_volume(int n) {
    require_dimension(n);
    return 0.5 * n * std::log(kPi) - std::lgamma(1.0 + 0.5 * n);
}

double unit_ball_volume(int n) { return std::exp(log_unit_ball_volume(n)); }

double radius_of_volume(int n, double v) {
    require_dimension(n);
    if (v < 0.0) throw ConfigError("ball volume must be nonnegative");
    if (v == 0.0) return 0.0;
    return std::exp((std::log(v) - log_unit_ball_volume(n)) / n);
}

double volume_of_radius(int n, double r) {
    require_dimension(n);
    if (r < 0.0) throw ConfigError("radius must be nonnegative");
    if (r == 0.0) return 0.0;
    return std::exp(log_unit_ball_volume(n) + n * std::log(r));
}

double stirling_scale(int n) {
    require_dimension(n);
    return std::sqrt(n / (2.0 * kPi * kE));
}

}  // namespace latprof::geometry
