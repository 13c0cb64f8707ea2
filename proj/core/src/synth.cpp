#include "omicsprep/synth.hpp"

#include <cmath>
#include <string>

#include "omicsprep/error.hpp"
#include "omicsprep/rng.hpp"

namespace omicsprep {
namespace {

void validate(const SynthConfig& c) {
  if (c.n_samples == 0 || c.n_features == 0) {
    throw ConfigError("n_samples and n_features must be at least 1");
  }
  if (!(c.multiplicative_noise_sd >= 0.0)) {
    throw ConfigError("multiplicative_noise_sd must be non-negative");
  }
  if (c.peak_locations.size() != c.peak_log_means.size()) {
    throw ConfigError("peak_locations and peak_log_means differ in length");
  }
  for (auto loc : c.peak_locations) {
    if (loc >= c.n_features) {
      throw ConfigError("peak location " + std::to_string(loc) +
                        " outside 0.." + std::to_string(c.n_features - 1));
    }
  }
  if (c.batch_shifts && !c.batch_of) {
    throw ConfigError("batch_shifts given without batch_of");
  }
  if (c.batch_of) {
    if (c.batch_of->size() != c.n_samples) {
      throw ConfigError("batch_of must have one entry per sample");
    }
    if (c.batch_shifts) {
      for (auto b : *c.batch_of) {
        if (b >= c.batch_shifts->size()) {
          throw ConfigError("batch index " + std::to_string(b) +
                            " has no entry in batch_shifts");
        }
      }
    }
  }
}

}  // namespace

FeatureMatrix synthesize(const SynthConfig& config) {
  validate(config);
  const std::size_t n = config.n_samples;
  const std::size_t p = config.n_features;

  std::vector<double> profile(p, config.baseline_log_mean);
  for (std::size_t k = 0; k < config.peak_locations.size(); ++k) {
    profile[config.peak_locations[k]] += config.peak_log_means[k];
  }

  const CounterStream noise(config.seed, 0);
  std::vector<double> values(n * p);
  for (std::size_t i = 0; i < n; ++i) {
    double shift = 0.0;
    if (config.batch_shifts) shift = (*config.batch_shifts)[(*config.batch_of)[i]];
    for (std::size_t j = 0; j < p; ++j) {
      double log_value = profile[j] + shift;
      if (config.multiplicative_noise_sd > 0.0) {
        log_value += config.multiplicative_noise_sd * noise.normal(i * p + j);
      }
      values[i * p + j] = std::exp(log_value);
    }
  }

  std::optional<Labels> batch;
  if (config.batch_of) {
    batch.emplace();
    for (auto b : *config.batch_of) batch->push_back(std::to_string(b + 1));
  }
  return FeatureMatrix(n, p, std::move(values), numbered_labels("s", n),
                       numbered_labels("f", p), std::nullopt, std::move(batch));
}

}  // namespace omicsprep
