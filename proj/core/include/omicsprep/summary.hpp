#pragma once

#include <string>
#include <vector>

#include "omicsprep/feature_matrix.hpp"

namespace omicsprep {

/// Within-sample location and spread, used to spot plate-to-plate shifts.
struct SampleSummary {
  std::string sample_id;
  double median = 0.0;
  double iqr = 0.0;  ///< 75th minus 25th percentile (type-7), never negative
};

std::vector<SampleSummary> sample_summaries(const FeatureMatrix& matrix);

}  // namespace omicsprep
