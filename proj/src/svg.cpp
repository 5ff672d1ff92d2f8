#include "latprof/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "latprof/errors.hpp"

namespace latprof::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 56.0;

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", x);
    return buf;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    double map(double v, bool vertical) const {
        const double t = (v - lo) / (hi - lo);
        return vertical ? kHeight - kMargin - t * (kHeight - 2 * kMargin)
                        : kMargin + t * (kWidth - 2 * kMargin);
    }
};

std::string header(const std::string& title) {
    std::string s =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
        "viewBox=\"0 0 640 480\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
    s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"14\">" + title + "</text>\n";
    s += "<rect x=\"" + num(kMargin) + "\" y=\"" + num(kMargin) + "\" width=\"" +
         num(kWidth - 2 * kMargin) + "\" height=\"" + num(kHeight - 2 * kMargin) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    return s;
}

}  // namespace

std::string render_tail_svg(const std::vector<TailPoint>& points, const std::string& title) {
    if (points.empty()) throw ConfigError("empty tail table: nothing to plot");

    const double p_floor = 1e-6;
    Axis ax, ay;
    ax.lo = std::log10(points.front().t);
    ax.hi = std::log10(points.back().t);
    if (ax.hi <= ax.lo) {
        ax.lo -= 0.5;
        ax.hi += 0.5;
    }
    ay.lo = 0.0;
    ay.hi = std::log10(p_floor);  // inverted: larger p sits higher
    std::swap(ay.lo, ay.hi);

    auto px = [&](double t) { return ax.map(std::log10(t), false); };
    auto py = [&](double p) { return ay.map(std::log10(std::max(p, p_floor)), true); };

    std::string s = header(title);
    // envelope line
    s += "<polyline fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"4 3\" points=\"";
    for (const auto& pt : points) s += num(px(pt.t)) + "," + num(py(pt.envelope)) + " ";
    s += "\"/>\n";
    for (const auto& pt : points) {
        s += "<g class=\"tail-point\">\n";
        s += "<line stroke=\"#1f5fbf\" x1=\"" + num(px(pt.t)) + "\" y1=\"" + num(py(pt.ci_lo)) +
             "\" x2=\"" + num(px(pt.t)) + "\" y2=\"" + num(py(pt.ci_hi)) + "\"/>\n";
        s += "<circle fill=\"#1f5fbf\" r=\"3.5\" cx=\"" + num(px(pt.t)) + "\" cy=\"" +
             num(py(pt.p)) + "\"/>\n";
        s += "</g>\n";
    }
    s += "<text x=\"320\" y=\"466\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"12\">log10 T</text>\n";
    s += "<text x=\"16\" y=\"240\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"12\" transform=\"rotate(-90 16 240)\">log10 P</text>\n";
    s += "</svg>\n";
    return s;
}

std::string render_curve_svg(const std::vector<std::pair<double, double>>& curve,
                             const std::string& title) {
    if (curve.empty()) throw ConfigError("empty profile curve: nothing to plot");
    Axis ax, ay;
    ax.lo = 0.0;
    ax.hi = curve.back().first * 1.05;
    ay.lo = 0.0;
    ay.hi = 0.0;
    for (const auto& [v, g] : curve) ay.hi = std::max(ay.hi, g);
    ay.hi *= 1.1;
    if (ay.hi <= 0.0) ay.hi = 1.0;

    std::string s = header(title);
    // Step rendering: G is constant between jumps and drops as 1/V.
    s += "<polyline fill=\"none\" stroke=\"#b03030\" points=\"";
    for (const auto& [v, g] : curve) s += num(ax.map(v, false)) + "," + num(ay.map(g, true)) + " ";
    s += "\"/>\n";
    for (const auto& [v, g] : curve)
        s += "<circle fill=\"#b03030\" r=\"3\" cx=\"" + num(ax.map(v, false)) + "\" cy=\"" +
             num(ay.map(g, true)) + "\"/>\n";
    s += "<text x=\"320\" y=\"466\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"12\">V (normalized)</text>\n";
    s += "<text x=\"16\" y=\"240\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"12\" transform=\"rotate(-90 16 240)\">G(V)</text>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace latprof::svg
