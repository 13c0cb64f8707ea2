#include "omicsprep/pipeline.hpp"

#include "omicsprep/error.hpp"

namespace omicsprep {

Pipeline::Pipeline(std::vector<TransformStep> steps) : steps_(std::move(steps)) {
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    try {
      validate(steps_[k]);
    } catch (const TransformError& e) {
      throw TransformError(k, e.what());
    }
  }
}

std::vector<std::string> ordering_warnings(const Pipeline& pipeline) {
  std::vector<std::string> out;
  const auto& steps = pipeline.steps();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (!is_scaling(steps[k])) continue;
    for (std::size_t later = k + 1; later < steps.size(); ++later) {
      if (std::holds_alternative<LogShift>(steps[later])) {
        out.push_back("step order: " + std::string(kind_name(steps[k])) +
                      " (step " + std::to_string(k) +
                      ") precedes log_shift (step " + std::to_string(later) +
                      "); scaling statistics should be computed after the log transform");
        break;
      }
    }
  }
  return out;
}

PipelineResult apply_pipeline(const FeatureMatrix& matrix, const Pipeline& pipeline) {
  PipelineResult result{matrix, {}, ordering_warnings(pipeline)};
  result.audit.reserve(pipeline.steps().size());
  for (std::size_t k = 0; k < pipeline.steps().size(); ++k) {
    try {
      auto step = apply_step(result.matrix, pipeline.steps()[k]);
      result.matrix = std::move(step.matrix);
      result.audit.push_back(std::move(step.audit));
    } catch (const TransformError& e) {
      throw TransformError(k, e.what());
    } catch (const ValidationError& e) {
      throw TransformError(k, e.what());
    }
  }
  return result;
}

}  // namespace omicsprep
