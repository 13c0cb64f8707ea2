#include "omicsprep/serialize.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <set>

#include "omicsprep/error.hpp"

namespace omicsprep {
namespace {

using nlohmann::json;

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

void reject_unknown(const json& object, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

// Non-finite doubles have no JSON spelling; they are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

TransformStep step_from_json(const json& j, std::size_t index) {
  const std::string where = "pipeline step " + std::to_string(index);
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  reject_unknown(j, {"kind", "params"}, where);
  if (!j.contains("kind")) throw ConfigError(where + ": missing 'kind'");
  const auto kind = get_as<std::string>(j.at("kind"), where);
  const json params = j.value("params", json::object());
  if (!params.is_object()) throw ConfigError(where + ": 'params' must be an object");

  if (kind == "log_shift") {
    reject_unknown(params, {"a"}, where);
    return LogShift{get_as<double>(params.value("a", json(1.0)), where)};
  }
  if (kind == "unit_sd_scale") {
    reject_unknown(params, {"center"}, where);
    return UnitSdScale{get_as<bool>(params.value("center", json(false)), where)};
  }
  if (kind == "max_peak") {
    reject_unknown(params, {"mode"}, where);
    const auto mode = get_as<std::string>(params.value("mode", json("per_spectrum")), where);
    if (mode == "per_spectrum") return MaxPeak{MaxPeakMode::per_spectrum};
    if (mode == "mean_spectrum_location") return MaxPeak{MaxPeakMode::mean_spectrum_location};
    throw ConfigError(where + ": unknown max_peak mode '" + mode + "'");
  }
  if (kind == "binarize") {
    reject_unknown(params, {"thresholds"}, where);
    if (!params.contains("thresholds")) throw ConfigError(where + ": binarize needs 'thresholds'");
    return Binarize{get_as<std::vector<double>>(params.at("thresholds"), where)};
  }
  const std::pair<std::string_view, TransformStep> plain[] = {
      {"pareto_scale", ParetoScale{}}, {"median_iqr_scale", MedianIqrScale{}},
      {"closure", Closure{}},          {"lag_diff", LagDiff{}},
      {"quantile", Quantile{}},
  };
  for (const auto& [name, step] : plain) {
    if (kind == name) {
      reject_unknown(params, {}, where);
      return step;
    }
  }
  throw ConfigError(where + ": unknown transform kind '" + kind + "'");
}

json step_to_json(const TransformStep& step) {
  json params = json::object();
  if (const auto* s = std::get_if<LogShift>(&step)) params["a"] = s->shift;
  if (const auto* s = std::get_if<UnitSdScale>(&step)) params["center"] = s->center;
  if (const auto* s = std::get_if<MaxPeak>(&step)) {
    params["mode"] = s->mode == MaxPeakMode::per_spectrum ? "per_spectrum"
                                                          : "mean_spectrum_location";
  }
  if (const auto* s = std::get_if<Binarize>(&step)) params["thresholds"] = numbers(s->thresholds);
  return {{"kind", std::string(kind_name(step))}, {"params", params}};
}

Scenario scenario_from_json(const json& j) {
  if (j.is_string()) {
    const auto key = j.get<std::string>();
    if (auto s = find_builtin_scenario(key)) return *s;
    throw ConfigError("unknown built-in scenario '" + key + "'");
  }
  if (!j.is_object()) throw ConfigError("scenario must be a name or an object");
  reject_unknown(j, {"name", "plates", "analysis"}, "scenario");
  Scenario s;
  s.name = get_as<std::string>(j.value("name", json("custom")), "scenario name");
  const std::string where = "scenario '" + s.name + "'";
  if (!j.contains("plates")) throw ConfigError(where + ": missing 'plates'");
  for (const auto& plate : j.at("plates")) {
    const auto counts = get_as<std::vector<std::size_t>>(plate, where + " plates");
    if (counts.size() != 2) throw ConfigError(where + ": plates are [cases, controls] pairs");
    s.plates.push_back({counts[0], counts[1]});
  }
  const auto analysis = get_as<std::string>(
      j.value("analysis", json(s.plates.size() == 1 ? "ols" : "lmm")), where);
  if (analysis == "ols") {
    s.analysis = Analysis::ols;
  } else if (analysis == "lmm") {
    s.analysis = Analysis::lmm_reml;
  } else {
    throw ConfigError(where + ": analysis must be 'ols' or 'lmm'");
  }
  s.validate();
  return s;
}

}  // namespace

Pipeline pipeline_from_json(std::string_view text) {
  const json j = parse(text);
  if (!j.is_array()) throw ConfigError("pipeline must be a JSON array of steps");
  std::vector<TransformStep> steps;
  for (std::size_t k = 0; k < j.size(); ++k) steps.push_back(step_from_json(j[k], k));
  return Pipeline(std::move(steps));
}

std::string pipeline_to_json(const Pipeline& pipeline) {
  json out = json::array();
  for (const auto& step : pipeline.steps()) out.push_back(step_to_json(step));
  return out.dump(2) + "\n";
}

std::string audit_to_json(const PipelineResult& result) {
  json steps = json::array();
  for (const auto& a : result.audit) {
    json fitted = json::object();
    for (const auto& [name, values] : a.fitted) fitted[name] = numbers(values);
    json step{{"kind", a.kind}, {"fitted", fitted}};
    if (a.location) step["location"] = *a.location;
    steps.push_back(step);
  }
  json out{{"steps", steps}, {"warnings", result.warnings}};
  return out.dump(2) + "\n";
}

std::string report_to_json(const ConfoundingReport& report) {
  json table = json::array();
  for (std::size_t k = 0; k < report.counts.size(); ++k) {
    json row{{"plate", k + 1}};
    for (std::size_t g = 0; g < report.groups.size(); ++g) {
      row[report.groups[g]] = report.counts[k][g];
    }
    table.push_back(row);
  }
  json out{{"groups", report.groups},
           {"table", table},
           {"n_plates", report.counts.size()},
           {"single_group_batches", report.single_group_batches},
           {"chi_square", number(report.chi_square)},
           {"cramers_v", number(report.cramers_v)},
           {"verdict", std::string(verdict_name(report.verdict))}};
  return out.dump(2) + "\n";
}

std::string bias_report_to_json(const BiasReport& report) {
  json out{{"p", report.p},
           {"n", report.n},
           {"corr_before", numbers(report.corr_before)},
           {"corr_after", numbers(report.corr_after)},
           {"mean_offdiag_before", number(report.mean_offdiag_before)},
           {"mean_offdiag_after", number(report.mean_offdiag_after)}};
  return out.dump(2) + "\n";
}

std::string fit_to_json(const LmmFit& fit) {
  json out{{"mu_hat", number(fit.mu_hat)},
           {"beta_hat", number(fit.beta_hat)},
           {"sigma_b", number(fit.sigma_b)},
           {"sigma_e", number(fit.sigma_e)},
           {"se_beta", number(fit.se_beta)},
           {"statistic", number(fit.statistic)},
           {"p_value", number(fit.p_value)},
           {"df", number(fit.df)},
           {"method", std::string(method_name(fit.method))},
           {"converged", fit.converged},
           {"log_likelihood", number(fit.log_likelihood)},
           {"lambda", number(fit.lambda)}};
  return out.dump(2) + "\n";
}

SimConfig sim_config_from_json(std::string_view text) {
  const json j = parse(text);
  if (!j.is_object()) throw ConfigError("simulation config must be a JSON object");
  reject_unknown(j,
                 {"effect_sizes", "sigma_b_values", "sigma_e", "alpha", "n_reps", "seed",
                  "scenarios", "threads"},
                 "simulation config");
  SimConfig config;
  auto& g = config.grid;
  if (j.contains("effect_sizes")) g.effect_sizes = get_as<std::vector<double>>(j["effect_sizes"], "effect_sizes");
  if (j.contains("sigma_b_values")) g.sigma_b_values = get_as<std::vector<double>>(j["sigma_b_values"], "sigma_b_values");
  if (j.contains("sigma_e")) g.sigma_e = get_as<double>(j["sigma_e"], "sigma_e");
  if (j.contains("alpha")) g.alpha = get_as<double>(j["alpha"], "alpha");
  if (j.contains("n_reps")) g.n_reps = get_as<std::size_t>(j["n_reps"], "n_reps");
  if (j.contains("seed")) g.seed = get_as<std::uint64_t>(j["seed"], "seed");
  if (j.contains("threads")) config.threads = get_as<unsigned>(j["threads"], "threads");
  if (j.contains("scenarios")) {
    if (!j["scenarios"].is_array() || j["scenarios"].empty()) {
      throw ConfigError("'scenarios' must be a non-empty array");
    }
    config.scenarios.clear();
    std::set<std::string> names;
    for (const auto& s : j["scenarios"]) {
      config.scenarios.push_back(scenario_from_json(s));
      if (!names.insert(config.scenarios.back().name).second) {
        throw ConfigError("duplicate scenario name '" + config.scenarios.back().name + "'");
      }
    }
  }
  g.validate();
  return config;
}

std::string sim_config_to_json(const SimConfig& config) {
  json scenarios = json::array();
  for (const auto& s : config.scenarios) {
    json plates = json::array();
    for (const auto& p : s.plates) plates.push_back({p.cases, p.controls});
    scenarios.push_back({{"name", s.name},
                         {"plates", plates},
                         {"analysis", s.analysis == Analysis::ols ? "ols" : "lmm"}});
  }
  const auto& g = config.grid;
  json out{{"effect_sizes", numbers(g.effect_sizes)},
           {"sigma_b_values", numbers(g.sigma_b_values)},
           {"sigma_e", g.sigma_e},
           {"alpha", g.alpha},
           {"n_reps", g.n_reps},
           {"seed", g.seed},
           {"threads", config.threads},
           {"scenarios", scenarios}};
  return out.dump(2) + "\n";
}

}  // namespace omicsprep
