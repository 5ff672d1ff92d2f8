#pragma once

#include <string>
#include <vector>

namespace latprof::svg {

struct TailPoint {
    double t = 0.0;        // threshold
    double p = 0.0;        // empirical exceedance
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double envelope = 0.0;
};

// Log-log tail chart: empirical points with CI whiskers plus the envelope
// line.  Byte-deterministic for fixed input.  Throws on an empty table.
std::string render_tail_svg(const std::vector<TailPoint>& points, const std::string& title);

// Linear-axes step chart of (V, G(V)).  Throws on an empty curve.
std::string render_curve_svg(const std::vector<std::pair<double, double>>& curve,
                             const std::string& title);

}  // namespace latprof::svg
