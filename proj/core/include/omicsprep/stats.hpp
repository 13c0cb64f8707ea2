#pragma once

#include <span>
#include <vector>

namespace omicsprep::stats {

double mean(std::span<const double> x);

/// Sample standard deviation (n - 1 denominator). Requires x.size() >= 2.
double sd(std::span<const double> x);

/// Type-7 percentile: linear interpolation between order statistics at
/// position (n - 1) * prob. `prob` in [0, 1]; x must be non-empty.
double quantile(std::span<const double> x, double prob);
double quantile_sorted(std::span<const double> sorted, double prob);

double median(std::span<const double> x);
double iqr(std::span<const double> x);

/// Pearson correlation of two equal-length vectors. NaN when either has
/// zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Sample skewness g1 = m3 / m2^(3/2) with population moments.
double skewness(std::span<const double> x);

}  // namespace omicsprep::stats
