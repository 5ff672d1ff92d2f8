#pragma once

namespace latprof::geometry {

// log of kappa_n = vol{x in R^n : |x| <= 1} = pi^{n/2} / Gamma(1 + n/2).
// Kept in log space so callers can sweep n far past the direct formula's
// overflow point near n ~ 340.
double log_unit_ball_volume(int n);

double unit_ball_volume(int n);

// rho_n(v) = (v / kappa_n)^{1/n}, inverse of volume_of_radius in v.
double radius_of_volume(int n, double v);

// kappa_n r^n.
double volume_of_radius(int n, double r);

// sqrt(n / (2 pi e)): the radius scale of a volume-one ball, up to a
// 1 + O(log n / n) factor.  Reporting helper only.
double stirling_scale(int n);

}  // namespace latprof::geometry
