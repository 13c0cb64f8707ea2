#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "omicsprep/feature_matrix.hpp"

namespace omicsprep {

/// Log-normal spectrum generator settings.
///
/// log(value[i][j]) = baseline_log_mean
///                  + peak_log_means[k]   if j == peak_locations[k]
///                  + batch_shifts[batch_of[i]]
///                  + Normal(0, multiplicative_noise_sd^2)
struct SynthConfig {
  std::size_t n_samples = 1;
  std::size_t n_features = 1;
  std::vector<std::size_t> peak_locations;  ///< 0-based feature indices
  std::vector<double> peak_log_means;       ///< same length as peak_locations
  double baseline_log_mean = 0.0;
  double multiplicative_noise_sd = 0.0;
  std::optional<std::vector<double>> batch_shifts;
  std::optional<std::vector<std::size_t>> batch_of;  ///< 0-based, length n
  std::uint64_t seed = 0;
};

/// Deterministic in config.seed. Samples are named s1..sn, features f1..fp;
/// when batch_of is given the batch column holds "1".."B".
FeatureMatrix synthesize(const SynthConfig& config);

}  // namespace omicsprep
