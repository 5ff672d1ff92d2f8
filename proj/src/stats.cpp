#include "latprof/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "latprof/errors.hpp"

namespace latprof::stats {

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
    if (trials <= 0) throw ConfigError("wilson_interval needs trials > 0");
    if (successes < 0 || successes > trials) throw ConfigError("successes out of range");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p + z2 / (2.0 * n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    Interval out;
    out.lo = successes == 0 ? 0.0 : std::max(0.0, (center - half) / denom);
    out.hi = successes == trials ? 1.0 : std::min(1.0, (center + half) / denom);
    return out;
}

MeanVar mean_variance(const std::vector<double>& xs) {
    MeanVar mv;
    mv.count = static_cast<std::int64_t>(xs.size());
    if (xs.empty()) return mv;
    double sum = std::accumulate(xs.begin(), xs.end(), 0.0);
    mv.mean = sum / xs.size();
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) {
            const double d = x - mv.mean;
            ss += d * d;
        }
        mv.var = ss / (xs.size() - 1);
        mv.se_mean = std::sqrt(mv.var / xs.size());
    }
    return mv;
}

namespace {
long long kendall_s(const std::vector<double>& x, const std::vector<double>& y) {
    long long s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const double dx = x[j] - x[i];
            const double dy = y[j] - y[i];
            if (dx == 0.0 || dy == 0.0) continue;
            s += ((dx > 0) == (dy > 0)) ? 1 : -1;
        }
    }
    return s;
}
}  // namespace

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ConfigError("kendall_tau needs equal-length samples");
    const std::size_t m = x.size();
    if (m < 2) return 0.0;
    return static_cast<double>(kendall_s(x, y)) / (0.5 * m * (m - 1));
}

double kendall_pvalue_increasing(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ConfigError("kendall p-value needs equal-length samples");
    const std::size_t m = x.size();
    if (m < 2) return 1.0;
    if (m > 8) throw ConfigError("kendall exact p-value limited to 8 points");
    const long long s_obs = kendall_s(x, y);
    std::vector<double> perm = y;
    std::sort(perm.begin(), perm.end());
    long long total = 0;
    long long at_least = 0;
    do {
        ++total;
        if (kendall_s(x, perm) >= s_obs) ++at_least;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(at_least) / static_cast<double>(total);
}

}  // namespace latprof::stats
