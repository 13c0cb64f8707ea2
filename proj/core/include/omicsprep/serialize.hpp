#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "omicsprep/closure_bias.hpp"
#include "omicsprep/design.hpp"
#include "omicsprep/lmm.hpp"
#include "omicsprep/pipeline.hpp"
#include "omicsprep/powersim.hpp"

// JSON surfaces. Parsers throw ParseError (with line/column for malformed
// text) or ConfigError / TransformError for well-formed but invalid content.

namespace omicsprep {

/// Array of {"kind": ..., "params": {...}}; params may be omitted for
/// defaults. log_shift takes "a", unit_sd_scale "center", max_peak "mode"
/// ("per_spectrum" | "mean_spectrum_location"), binarize "thresholds".
Pipeline pipeline_from_json(std::string_view text);
std::string pipeline_to_json(const Pipeline& pipeline);

std::string audit_to_json(const PipelineResult& result);
std::string report_to_json(const ConfoundingReport& report);
std::string bias_report_to_json(const BiasReport& report);
std::string fit_to_json(const LmmFit& fit);

/// Simulation config: SimGrid fields plus "scenarios" (built-in keys such as
/// "E2", or {"name", "plates": [[cases, controls], ...], "analysis"}) and
/// "threads". Missing fields take their defaults; unknown keys are rejected.
struct SimConfig {
  SimGrid grid;
  std::vector<Scenario> scenarios = builtin_scenarios();
  unsigned threads = 0;
};
SimConfig sim_config_from_json(std::string_view text);
std::string sim_config_to_json(const SimConfig& config);

}  // namespace omicsprep
