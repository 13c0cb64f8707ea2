#include "omicsprep/powersim.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <exception>
#include <thread>

#include "omicsprep/csv.hpp"
#include "omicsprep/error.hpp"

namespace omicsprep {
namespace {

constexpr std::uint64_t kCaseBase = 0;
constexpr std::uint64_t kControlBase = 1ULL << 32;
constexpr std::uint64_t kPlateBase = 2ULL << 32;

}  // namespace

std::size_t Scenario::total_cases() const {
  std::size_t total = 0;
  for (const auto& p : plates) total += p.cases;
  return total;
}

std::size_t Scenario::total_controls() const {
  std::size_t total = 0;
  for (const auto& p : plates) total += p.controls;
  return total;
}

void Scenario::validate() const {
  if (plates.empty()) throw ConfigError("scenario '" + name + "' has no plates");
  for (std::size_t k = 0; k < plates.size(); ++k) {
    if (plates[k].cases + plates[k].controls == 0) {
      throw ConfigError("scenario '" + name + "': plate " + std::to_string(k + 1) +
                        " is empty");
    }
  }
  if (total_cases() == 0 || total_controls() == 0) {
    throw ConfigError("scenario '" + name + "' needs both cases and controls");
  }
}

Scenario single_plate_scenario() {
  return {"single-plate", {{97, 191}}, Analysis::ols};
}

Scenario blocked_scenario() {
  return {"blocked", {{32, 65}, {32, 63}, {33, 63}}, Analysis::lmm_reml};
}

Scenario confounded_scenario() {
  return {"confounded", {{97, 0}, {0, 95}, {0, 96}}, Analysis::lmm_reml};
}

Scenario glycomics_scenario() {
  // Plates in assignment order, read down each column of the published
  // table and then across.
  return {"glycomics",
          {{4, 0},  {3, 0},   {11, 0}, {5, 0},  {12, 0}, {21, 40}, {1, 3},
           {2, 0},  {16, 13}, {0, 15}, {1, 3},  {0, 9},  {4, 0},   {1, 0},
           {1, 0},  {1, 0},   {2, 0},  {0, 4},  {0, 3},  {0, 16},  {0, 15},
           {1, 0},  {3, 0},   {0, 4},  {1, 0},  {0, 5},  {1, 9},   {2, 8},
           {0, 4},  {2, 14},  {1, 6},  {1, 9},  {0, 7},  {0, 4}},
          Analysis::lmm_reml};
}

std::vector<Scenario> builtin_scenarios() {
  return {single_plate_scenario(), blocked_scenario(), confounded_scenario(),
          glycomics_scenario()};
}

std::optional<Scenario> find_builtin_scenario(std::string_view key) {
  const auto all = builtin_scenarios();
  static constexpr std::string_view ids[] = {"E1", "E2", "E3", "E4"};
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (key == ids[k] || key == all[k].name) return all[k];
  }
  return std::nullopt;
}

std::vector<double> SimGrid::default_effects() {
  std::vector<double> out;
  for (int k = 0; k <= 15; ++k) out.push_back(k / 10.0);
  return out;
}

void SimGrid::validate() const {
  if (effect_sizes.empty()) throw ConfigError("effect_sizes is empty");
  if (sigma_b_values.empty()) throw ConfigError("sigma_b_values is empty");
  for (double e : effect_sizes) {
    if (!std::isfinite(e)) throw ConfigError("effect sizes must be finite");
  }
  if (!std::is_sorted(effect_sizes.begin(), effect_sizes.end())) {
    throw ConfigError("effect_sizes must be ascending");
  }
  for (double s : sigma_b_values) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("sigma_b values must be >= 0");
  }
  if (!(sigma_e > 0.0) || !std::isfinite(sigma_e)) throw ConfigError("sigma_e must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (n_reps == 0) throw ConfigError("n_reps must be at least 1");
}

CounterStream replicate_stream(std::uint64_t seed, std::size_t replicate) {
  return CounterStream(seed, mix64(static_cast<std::uint64_t>(replicate)));
}

LmmData generate_replicate(const Scenario& scenario, double effect, double sigma_b,
                           double sigma_e, const CounterStream& stream) {
  const std::size_t n = scenario.total_cases() + scenario.total_controls();
  LmmData data;
  data.y.reserve(n);
  data.group.reserve(n);
  data.batch.reserve(n);
  std::uint64_t case_slot = 0, control_slot = 0;
  for (std::size_t k = 0; k < scenario.plates.size(); ++k) {
    const double plate_effect =
        sigma_b == 0.0 ? 0.0 : sigma_b * stream.normal(kPlateBase + k);
    auto add = [&](int group, std::uint64_t index) {
      const double noise = sigma_e == 0.0 ? 0.0 : sigma_e * stream.normal(index);
      data.y.push_back(effect * group + plate_effect + noise);
      data.group.push_back(group);
      data.batch.push_back(k + 1);
    };
    for (std::size_t c = 0; c < scenario.plates[k].cases; ++c) {
      add(1, kCaseBase + case_slot++);
    }
    for (std::size_t c = 0; c < scenario.plates[k].controls; ++c) {
      add(0, kControlBase + control_slot++);
    }
  }
  return data;
}

std::vector<PowerCurve> run_power(const Scenario& scenario, const SimGrid& grid,
                                  const RunOptions& options) {
  scenario.validate();
  grid.validate();

  const std::size_t n_sigma = grid.sigma_b_values.size();
  const std::size_t n_effect = grid.effect_sizes.size();
  std::vector<PowerCurve> curves(n_sigma);
  for (std::size_t s = 0; s < n_sigma; ++s) {
    curves[s].scenario = scenario.name;
    curves[s].sigma_b = grid.sigma_b_values[s];
    curves[s].points.resize(n_effect);
  }

  auto run_cell = [&](std::size_t cell) {
    const std::size_t s = cell / n_effect;
    const std::size_t e = cell % n_effect;
    const double effect = grid.effect_sizes[e];
    std::size_t rejected = 0, failed = 0;
    for (std::size_t r = 0; r < grid.n_reps; ++r) {
      const auto data = generate_replicate(scenario, effect, grid.sigma_b_values[s],
                                           grid.sigma_e, replicate_stream(grid.seed, r));
      try {
        const LmmFit fit = scenario.analysis == Analysis::ols
                               ? fit_ols(data.y, data.group)
                               : fit_lmm(data, FitMethod::reml, options.lmm);
        if (!fit.converged) {
          ++failed;
          continue;
        }
        rejected += wald_test(fit, grid.alpha);
      } catch (const FitError&) {
        ++failed;
      }
    }
    auto& point = curves[s].points[e];
    point.effect = effect;
    point.n_rejected = rejected;
    point.n_failed = failed;
    const std::size_t valid = grid.n_reps - failed;
    point.power = valid ? static_cast<double>(rejected) / static_cast<double>(valid) : 0.0;
    point.mc_standard_error =
        std::sqrt(point.power * (1.0 - point.power) / static_cast<double>(grid.n_reps));
    point.flagged = static_cast<double>(failed) > 0.01 * static_cast<double>(grid.n_reps);
  };

  const std::size_t n_cells = n_sigma * n_effect;
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_cells)));
  if (threads == 1) {
    for (std::size_t c = 0; c < n_cells; ++c) run_cell(c);
    return curves;
  }

  // Cells write disjoint slots, so only the work counter is shared.
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t c; (c = next.fetch_add(1)) < n_cells;) run_cell(c);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return curves;
}

bool any_flagged(const std::vector<PowerCurve>& curves) {
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      if (p.flagged) return true;
    }
  }
  return false;
}

double analytic_power_ols(double effect, std::size_t n1, std::size_t n2, double sigma,
                          double alpha) {
  if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
  if (n1 == 0 || n2 == 0) throw ConfigError("group sizes must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  const boost::math::normal_distribution<> normal;
  const double z = boost::math::quantile(normal, 1.0 - alpha / 2.0);
  const double ncp = std::abs(effect) /
                     (sigma * std::sqrt(1.0 / static_cast<double>(n1) +
                                        1.0 / static_cast<double>(n2)));
  return boost::math::cdf(normal, ncp - z) + boost::math::cdf(normal, -ncp - z);
}

std::string curves_to_csv(const std::vector<PowerCurve>& curves) {
  std::string out = "scenario,sigma_b,effect,power,mc_se\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out += csv::join({c.scenario, csv::format_double(c.sigma_b),
                        csv::format_double(p.effect), csv::format_double(p.power),
                        csv::format_double(p.mc_standard_error)});
      out.push_back('\n');
    }
  }
  return out;
}

std::vector<PowerCurve> parse_curves_csv(std::string_view text) {
  const auto records = csv::read_records(text);
  if (records.empty() || records.front() != csv::Record{"scenario", "sigma_b", "effect",
                                                        "power", "mc_se"}) {
    throw ParseError("power CSV must start with header scenario,sigma_b,effect,power,mc_se");
  }
  std::vector<PowerCurve> curves;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != 5) throw ParseError("power CSV row " + std::to_string(r + 1) + ": expected 5 fields");
    double v[4];
    for (int k = 0; k < 4; ++k) {
      if (!csv::parse_double(rec[k + 1], v[k])) {
        throw ParseError("power CSV row " + std::to_string(r + 1) + ": bad number '" +
                         rec[k + 1] + "'");
      }
    }
    if (curves.empty() || curves.back().scenario != rec[0] || curves.back().sigma_b != v[0]) {
      curves.push_back({rec[0], v[0], {}});
    }
    PowerPoint point;
    point.effect = v[1];
    point.power = v[2];
    point.mc_standard_error = v[3];
    curves.back().points.push_back(point);
  }
  return curves;
}

void emit_curves(const std::vector<PowerCurve>& curves, const std::filesystem::path& path,
                 CurveFormat format) {
  if (curves.empty()) throw ConfigError("no power curves to emit");
  csv::write_file(path, format == CurveFormat::csv ? curves_to_csv(curves)
                                                   : curves_to_svg(curves));
}

}  // namespace omicsprep
