#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace omicsprep {

/// Correlation structure of i.i.d. data before and after closure.
struct BiasReport {
  std::size_t p = 0;
  std::size_t n = 0;
  std::vector<double> corr_before;  ///< p x p, row-major
  std::vector<double> corr_after;   ///< p x p, row-major
  double mean_offdiag_before = 0.0;
  double mean_offdiag_after = 0.0;
};

/// Draws n rows of p i.i.d. log-normal variables (unit log-variance), closes
/// each row to sum 1, and reports Pearson correlations on both sides.
/// Requires p >= 2 and n >= 100.
BiasReport closure_bias_experiment(std::size_t p, std::size_t n, std::uint64_t seed);

}  // namespace omicsprep
