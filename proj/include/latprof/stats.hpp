#pragma once

#include <cstdint>
#include <vector>

namespace latprof::stats {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

// Wilson score interval for a binomial proportion.  Stays sane at zero or
// full counts, unlike the Wald interval.
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.959963984540054);

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;  // unbiased sample variance
    double se_mean = 0.0;
    std::int64_t count = 0;
};

MeanVar mean_variance(const std::vector<double>& xs);

// Kendall tau-a on paired samples; ties contribute zero.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

// One-sided exact p-value for positive (increasing) association, by full
// permutation enumeration.  Sizes up to 8 points.
double kendall_pvalue_increasing(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace latprof::stats
