#include "omicsprep/feature_matrix.hpp"

#include <cmath>
#include <unordered_set>

#include "omicsprep/error.hpp"

namespace omicsprep {
namespace {

void require_unique(const Labels& labels, const char* what) {
  std::unordered_set<std::string> seen;
  seen.reserve(labels.size());
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      throw ValidationError(std::string("duplicate ") + what + " '" + label +
                            "'");
    }
  }
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::size_t n_samples, std::size_t n_features,
                             std::vector<double> values, Labels sample_ids,
                             Labels feature_labels, std::optional<Labels> group,
                             std::optional<Labels> batch)
    : n_(n_samples),
      p_(n_features),
      values_(std::move(values)),
      sample_ids_(std::move(sample_ids)),
      feature_labels_(std::move(feature_labels)),
      group_(std::move(group)),
      batch_(std::move(batch)) {
  if (n_ == 0 || p_ == 0) {
    throw ValidationError("feature matrix needs at least one sample and one feature");
  }
  if (values_.size() != n_ * p_) {
    throw ValidationError("value count " + std::to_string(values_.size()) +
                          " does not match " + std::to_string(n_) + "x" +
                          std::to_string(p_));
  }
  if (sample_ids_.size() != n_) {
    throw ValidationError("expected " + std::to_string(n_) + " sample ids, got " +
                          std::to_string(sample_ids_.size()));
  }
  if (feature_labels_.size() != p_) {
    throw ValidationError("expected " + std::to_string(p_) +
                          " feature labels, got " +
                          std::to_string(feature_labels_.size()));
  }
  if (group_ && group_->size() != n_) {
    throw ValidationError("group vector length differs from sample count");
  }
  if (batch_ && batch_->size() != n_) {
    throw ValidationError("batch vector length differs from sample count");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (std::isnan(values_[k])) {
      throw ValidationError("NaN at sample '" + sample_ids_[k / p_] +
                            "', feature '" + feature_labels_[k % p_] + "'");
    }
  }
  require_unique(sample_ids_, "sample id");
  require_unique(feature_labels_, "feature label");
}

std::vector<double> FeatureMatrix::column(std::size_t j) const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = values_[i * p_ + j];
  return out;
}

FeatureMatrix FeatureMatrix::with_values(std::vector<double> values) const {
  return with_values(std::move(values), feature_labels_);
}

FeatureMatrix FeatureMatrix::with_values(std::vector<double> values,
                                         Labels feature_labels) const {
  const std::size_t p = feature_labels.size();
  return FeatureMatrix(n_, p, std::move(values), sample_ids_,
                       std::move(feature_labels), group_, batch_);
}

Labels numbered_labels(const std::string& prefix, std::size_t count) {
  Labels out;
  out.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

}  // namespace omicsprep
