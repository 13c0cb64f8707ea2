#include "omicsprep/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "omicsprep/error.hpp"
#include "omicsprep/stats.hpp"

namespace omicsprep {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string cell_name(const FeatureMatrix& m, std::size_t i, std::size_t j) {
  return "sample '" + m.sample_ids()[i] + "', feature '" +
         m.feature_labels()[j] + "'";
}

std::string join_labels(const std::vector<std::string>& labels) {
  std::string out;
  for (const auto& l : labels) {
    if (!out.empty()) out += ", ";
    out += "'" + l + "'";
  }
  return out;
}

std::vector<double> column_sds(const FeatureMatrix& m, const char* kind) {
  if (m.n_samples() < 2) {
    throw TransformError(std::string(kind) + " needs at least 2 samples");
  }
  std::vector<double> sds(m.n_features());
  std::vector<std::string> zero;
  for (std::size_t j = 0; j < m.n_features(); ++j) {
    sds[j] = stats::sd(m.column(j));
    if (!(sds[j] > 0.0)) zero.push_back(m.feature_labels()[j]);
  }
  if (!zero.empty()) {
    throw TransformError(std::string(kind) + ": zero standard deviation in column(s) " +
                         join_labels(zero));
  }
  return sds;
}

StepResult do_log_shift(const FeatureMatrix& m, const LogShift& s) {
  std::vector<double> out(m.values().begin(), m.values().end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double arg = out[k] + s.shift;
    if (!(arg > 0.0)) {
      throw TransformError("log_shift: value + a = " + std::to_string(arg) +
                           " is not positive at " +
                           cell_name(m, k / m.n_features(), k % m.n_features()));
    }
    out[k] = std::log(arg);
  }
  return {m.with_values(std::move(out)), {"log_shift", {{"a", {s.shift}}}, {}}};
}

StepResult do_unit_sd(const FeatureMatrix& m, const UnitSdScale& s) {
  const auto sds = column_sds(m, "unit_sd_scale");
  const std::size_t p = m.n_features();
  std::vector<double> means(p, 0.0);
  if (s.center) {
    for (std::size_t j = 0; j < p; ++j) means[j] = stats::mean(m.column(j));
  }
  std::vector<double> out(m.values().begin(), m.values().end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = (out[k] - means[k % p]) / sds[k % p];
  }
  StepAudit audit{"unit_sd_scale", {{"column_sd", sds}}, {}};
  if (s.center) audit.fitted.emplace_back("column_mean", means);
  return {m.with_values(std::move(out)), std::move(audit)};
}

StepResult do_pareto(const FeatureMatrix& m) {
  const auto sds = column_sds(m, "pareto_scale");
  const std::size_t p = m.n_features();
  std::vector<double> out(m.values().begin(), m.values().end());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] /= std::sqrt(sds[k % p]);
  return {m.with_values(std::move(out)), {"pareto_scale", {{"column_sd", sds}}, {}}};
}

StepResult do_median_iqr(const FeatureMatrix& m) {
  const std::size_t p = m.n_features();
  std::vector<double> medians(p), iqrs(p);
  std::vector<std::string> zero;
  for (std::size_t j = 0; j < p; ++j) {
    auto col = m.column(j);
    std::sort(col.begin(), col.end());
    medians[j] = stats::quantile_sorted(col, 0.5);
    iqrs[j] = stats::quantile_sorted(col, 0.75) - stats::quantile_sorted(col, 0.25);
    if (!(iqrs[j] > 0.0)) zero.push_back(m.feature_labels()[j]);
  }
  if (!zero.empty()) {
    throw TransformError("median_iqr_scale: zero IQR in column(s) " + join_labels(zero));
  }
  std::vector<double> out(m.values().begin(), m.values().end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = (out[k] - medians[k % p]) / iqrs[k % p];
  }
  return {m.with_values(std::move(out)),
          {"median_iqr_scale", {{"column_median", medians}, {"column_iqr", iqrs}}, {}}};
}

StepResult do_closure(const FeatureMatrix& m) {
  const std::size_t p = m.n_features();
  std::vector<double> out(m.values().begin(), m.values().end());
  std::vector<double> sums(m.n_samples());
  for (std::size_t i = 0; i < m.n_samples(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      const double v = m(i, j);
      if (v < 0.0) {
        throw TransformError("closure: negative value at " + cell_name(m, i, j));
      }
      sum += v;
    }
    if (!(sum > 0.0)) {
      throw TransformError("closure: row sum is not positive for sample '" +
                           m.sample_ids()[i] + "'");
    }
    sums[i] = sum;
    for (std::size_t j = 0; j < p; ++j) out[i * p + j] /= sum;
  }
  return {m.with_values(std::move(out)), {"closure", {{"row_sum", sums}}, {}}};
}

StepResult do_max_peak(const FeatureMatrix& m, const MaxPeak& s) {
  const std::size_t n = m.n_samples();
  const std::size_t p = m.n_features();
  for (std::size_t k = 0; k < n * p; ++k) {
    if (m.values()[k] < 0.0) {
      throw TransformError("max_peak: negative value at " + cell_name(m, k / p, k % p));
    }
  }

  std::vector<double> divisors(n);
  StepAudit audit{"max_peak", {}, {}};
  if (s.mode == MaxPeakMode::per_spectrum) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = m.row(i);
      divisors[i] = *std::max_element(row.begin(), row.end());
    }
  } else {
    std::vector<double> mean_spectrum(p);
    for (std::size_t j = 0; j < p; ++j) mean_spectrum[j] = stats::mean(m.column(j));
    const auto loc = static_cast<std::size_t>(
        std::max_element(mean_spectrum.begin(), mean_spectrum.end()) -
        mean_spectrum.begin());
    for (std::size_t i = 0; i < n; ++i) divisors[i] = m(i, loc);
    audit.location = loc;
    audit.fitted.emplace_back("mean_spectrum", std::move(mean_spectrum));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(divisors[i] > 0.0)) {
      throw TransformError("max_peak: zero divisor for sample '" +
                           m.sample_ids()[i] + "'");
    }
  }
  std::vector<double> out(m.values().begin(), m.values().end());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] /= divisors[k / p];
  audit.fitted.emplace_back("divisor", divisors);
  return {m.with_values(std::move(out)), std::move(audit)};
}

StepResult do_lag_diff(const FeatureMatrix& m) {
  const std::size_t p = m.n_features();
  if (p < 2) throw TransformError("lag_diff needs at least 2 features");
  const std::size_t n = m.n_samples();
  std::vector<double> out;
  out.reserve(n * (p - 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j + 1 < p; ++j) out.push_back(m(i, j + 1) - m(i, j));
  }
  Labels labels;
  labels.reserve(p - 1);
  const auto& in = m.feature_labels();
  for (std::size_t j = 0; j + 1 < p; ++j) labels.push_back(in[j + 1] + "-" + in[j]);
  return {m.with_values(std::move(out), std::move(labels)), {"lag_diff", {}, {}}};
}

StepResult do_quantile(const FeatureMatrix& m) {
  const std::size_t n = m.n_samples();
  const std::size_t p = m.n_features();
  if (n < 2) throw TransformError("quantile needs at least 2 samples");

  std::vector<double> reference(p, 0.0);
  std::vector<double> sorted(p);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = m.row(i);
    sorted.assign(row.begin(), row.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t r = 0; r < p; ++r) reference[r] += sorted[r];
  }
  for (double& r : reference) r /= static_cast<double>(n);

  std::vector<double> out(n * p);
  std::vector<std::size_t> order(p);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = m.row(i);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
    // Runs of tied values share the mean of the reference values they span.
    for (std::size_t start = 0; start < p;) {
      std::size_t stop = start + 1;
      while (stop < p && row[order[stop]] == row[order[start]]) ++stop;
      double value = 0.0;
      for (std::size_t r = start; r < stop; ++r) value += reference[r];
      value /= static_cast<double>(stop - start);
      for (std::size_t r = start; r < stop; ++r) out[i * p + order[r]] = value;
      start = stop;
    }
  }
  return {m.with_values(std::move(out)), {"quantile", {{"reference", reference}}, {}}};
}

StepResult do_binarize(const FeatureMatrix& m, const Binarize& s) {
  const std::size_t p = m.n_features();
  if (s.thresholds.size() != p) {
    throw TransformError("binarize: " + std::to_string(s.thresholds.size()) +
                         " thresholds for " + std::to_string(p) + " features");
  }
  std::vector<double> out(m.values().begin(), m.values().end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = out[k] > s.thresholds[k % p] ? 1.0 : 0.0;
  }
  return {m.with_values(std::move(out)), {"binarize", {{"thresholds", s.thresholds}}, {}}};
}

}  // namespace

std::string_view kind_name(const TransformStep& step) {
  return std::visit(overloaded{
                        [](const LogShift&) { return std::string_view("log_shift"); },
                        [](const UnitSdScale&) { return std::string_view("unit_sd_scale"); },
                        [](const ParetoScale&) { return std::string_view("pareto_scale"); },
                        [](const MedianIqrScale&) { return std::string_view("median_iqr_scale"); },
                        [](const Closure&) { return std::string_view("closure"); },
                        [](const MaxPeak&) { return std::string_view("max_peak"); },
                        [](const LagDiff&) { return std::string_view("lag_diff"); },
                        [](const Quantile&) { return std::string_view("quantile"); },
                        [](const Binarize&) { return std::string_view("binarize"); },
                    },
                    step);
}

bool is_scaling(const TransformStep& step) {
  return std::holds_alternative<UnitSdScale>(step) ||
         std::holds_alternative<ParetoScale>(step) ||
         std::holds_alternative<MedianIqrScale>(step);
}

void validate(const TransformStep& step) {
  if (const auto* s = std::get_if<LogShift>(&step); s && !std::isfinite(s->shift)) {
    throw TransformError("log_shift: shift must be finite");
  }
  if (const auto* s = std::get_if<Binarize>(&step)) {
    if (s->thresholds.empty()) throw TransformError("binarize: no thresholds");
    for (double t : s->thresholds) {
      if (std::isnan(t)) throw TransformError("binarize: NaN threshold");
    }
  }
}

StepResult apply_step(const FeatureMatrix& matrix, const TransformStep& step) {
  validate(step);
  return std::visit(overloaded{
                        [&](const LogShift& s) { return do_log_shift(matrix, s); },
                        [&](const UnitSdScale& s) { return do_unit_sd(matrix, s); },
                        [&](const ParetoScale&) { return do_pareto(matrix); },
                        [&](const MedianIqrScale&) { return do_median_iqr(matrix); },
                        [&](const Closure&) { return do_closure(matrix); },
                        [&](const MaxPeak& s) { return do_max_peak(matrix, s); },
                        [&](const LagDiff&) { return do_lag_diff(matrix); },
                        [&](const Quantile&) { return do_quantile(matrix); },
                        [&](const Binarize& s) { return do_binarize(matrix, s); },
                    },
                    step);
}

FeatureMatrix log_shift(const FeatureMatrix& m, double a) {
  return apply_step(m, LogShift{a}).matrix;
}
FeatureMatrix unit_sd_scale(const FeatureMatrix& m, bool center) {
  return apply_step(m, UnitSdScale{center}).matrix;
}
FeatureMatrix pareto_scale(const FeatureMatrix& m) {
  return apply_step(m, ParetoScale{}).matrix;
}
FeatureMatrix median_iqr_scale(const FeatureMatrix& m) {
  return apply_step(m, MedianIqrScale{}).matrix;
}
FeatureMatrix closure(const FeatureMatrix& m) { return apply_step(m, Closure{}).matrix; }
FeatureMatrix max_peak(const FeatureMatrix& m, MaxPeakMode mode) {
  return apply_step(m, MaxPeak{mode}).matrix;
}
FeatureMatrix lag_diff(const FeatureMatrix& m) { return apply_step(m, LagDiff{}).matrix; }
FeatureMatrix quantile(const FeatureMatrix& m) { return apply_step(m, Quantile{}).matrix; }
FeatureMatrix binarize(const FeatureMatrix& m, std::vector<double> thresholds) {
  return apply_step(m, Binarize{std::move(thresholds)}).matrix;
}

}  // namespace omicsprep
