#pragma once

#include <string>
#include <vector>

#include "omicsprep/transforms.hpp"

namespace omicsprep {

/// Ordered, immutable list of transform steps. Steps are validated on
/// construction.
class Pipeline {
 public:
  Pipeline() = default;
  explicit Pipeline(std::vector<TransformStep> steps);

  const std::vector<TransformStep>& steps() const noexcept { return steps_; }
  bool empty() const noexcept { return steps_.empty(); }

 private:
  std::vector<TransformStep> steps_;
};

struct PipelineResult {
  FeatureMatrix matrix;
  std::vector<StepAudit> audit;       ///< one entry per applied step
  std::vector<std::string> warnings;  ///< advisory diagnostics, not errors
};

/// Warnings raised by the step order alone (a scaling step before log_shift).
std::vector<std::string> ordering_warnings(const Pipeline& pipeline);

/// Applies every step in order. A failing step aborts with a TransformError
/// carrying its index.
PipelineResult apply_pipeline(const FeatureMatrix& matrix, const Pipeline& pipeline);

}  // namespace omicsprep
