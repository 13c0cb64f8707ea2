#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "omicsprep/feature_matrix.hpp"

namespace omicsprep {

// Step parameter records. Each alternative of TransformStep names one
// transform; defaults follow the documented conventions (natural log with
// shift 1, no centering, per-spectrum maximum).

struct LogShift {
  double shift = 1.0;
};
struct UnitSdScale {
  bool center = false;
};
struct ParetoScale {};
struct MedianIqrScale {};
struct Closure {};

enum class MaxPeakMode { per_spectrum, mean_spectrum_location };
struct MaxPeak {
  MaxPeakMode mode = MaxPeakMode::per_spectrum;
};

struct LagDiff {};
struct Quantile {};

/// Detection-limit binarisation: 1 where value > threshold (strict).
struct Binarize {
  std::vector<double> thresholds;
};

using TransformStep =
    std::variant<LogShift, UnitSdScale, ParetoScale, MedianIqrScale, Closure,
                 MaxPeak, LagDiff, Quantile, Binarize>;

/// Canonical kind name, e.g. "log_shift", "unit_sd_scale".
std::string_view kind_name(const TransformStep& step);

/// Checks parameters that do not depend on data (finite shift, non-NaN
/// thresholds). Throws TransformError.
void validate(const TransformStep& step);

/// True for unit_sd_scale, pareto_scale and median_iqr_scale.
bool is_scaling(const TransformStep& step);

/// Statistics fitted while applying one step.
struct StepAudit {
  std::string kind;
  /// Named vectors, e.g. {"column_sd", ...}, {"reference", ...}.
  std::vector<std::pair<std::string, std::vector<double>>> fitted;
  /// Feature index chosen by max_peak in mean-spectrum mode.
  std::optional<std::size_t> location;
};

struct StepResult {
  FeatureMatrix matrix;
  StepAudit audit;
};

/// Applies one step. Throws TransformError on any data precondition.
StepResult apply_step(const FeatureMatrix& matrix, const TransformStep& step);

// Convenience wrappers; each returns apply_step(...).matrix.

/// Natural log of (value + a). Every value + a must be > 0.
FeatureMatrix log_shift(const FeatureMatrix& m, double a = 1.0);
/// Divide each column by its sample SD, optionally after centering.
FeatureMatrix unit_sd_scale(const FeatureMatrix& m, bool center = false);
/// Divide each column by the square root of its sample SD.
FeatureMatrix pareto_scale(const FeatureMatrix& m);
/// Subtract the column median, divide by the column IQR.
FeatureMatrix median_iqr_scale(const FeatureMatrix& m);
/// Divide each row by its sum.
FeatureMatrix closure(const FeatureMatrix& m);
FeatureMatrix max_peak(const FeatureMatrix& m,
                       MaxPeakMode mode = MaxPeakMode::per_spectrum);
/// Differences of adjacent features; p - 1 output columns.
FeatureMatrix lag_diff(const FeatureMatrix& m);
/// Replace values by the mean-of-order-statistics reference at their rank.
FeatureMatrix quantile(const FeatureMatrix& m);
FeatureMatrix binarize(const FeatureMatrix& m, std::vector<double> thresholds);

}  // namespace omicsprep
