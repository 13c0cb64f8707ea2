#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace omicsprep {

using Labels = std::vector<std::string>;

/// n samples by p features of spectral intensities, stored row-major.
///
/// Instances are validated on construction and immutable afterwards:
/// n >= 1, p >= 1, no NaN, unique sample ids and feature labels, and
/// group/batch vectors (when present) of length n. Transforms produce new
/// matrices through with_values(), which keeps the sample annotations.
class FeatureMatrix {
 public:
  FeatureMatrix(std::size_t n_samples, std::size_t n_features,
                std::vector<double> values, Labels sample_ids,
                Labels feature_labels,
                std::optional<Labels> group = std::nullopt,
                std::optional<Labels> batch = std::nullopt);

  std::size_t n_samples() const noexcept { return n_; }
  std::size_t n_features() const noexcept { return p_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * p_ + j];
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * p_, p_};
  }
  std::vector<double> column(std::size_t j) const;

  std::span<const double> values() const noexcept { return values_; }
  const Labels& sample_ids() const noexcept { return sample_ids_; }
  const Labels& feature_labels() const noexcept { return feature_labels_; }
  const std::optional<Labels>& group() const noexcept { return group_; }
  const std::optional<Labels>& batch() const noexcept { return batch_; }

  /// Same samples and annotations, new values (and optionally new features).
  FeatureMatrix with_values(std::vector<double> values) const;
  FeatureMatrix with_values(std::vector<double> values,
                            Labels feature_labels) const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t n_;
  std::size_t p_;
  std::vector<double> values_;
  Labels sample_ids_;
  Labels feature_labels_;
  std::optional<Labels> group_;
  std::optional<Labels> batch_;
};

/// Default labels "s1".."sn" / "f1".."fp".
Labels numbered_labels(const std::string& prefix, std::size_t count);

}  // namespace omicsprep
