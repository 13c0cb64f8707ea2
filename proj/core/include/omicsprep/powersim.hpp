#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omicsprep/design.hpp"
#include "omicsprep/lmm.hpp"
#include "omicsprep/rng.hpp"

namespace omicsprep {

enum class Analysis { ols, lmm_reml };

/// A plate layout (cases and controls per plate) and how it is analysed.
struct Scenario {
  std::string name;
  std::vector<PlateLayoutEntry> plates;
  Analysis analysis = Analysis::lmm_reml;

  std::size_t total_cases() const;
  std::size_t total_controls() const;
  void validate() const;
};

// The four designs of the 97-case / 191-control glycomics study.
Scenario single_plate_scenario();  ///< E1: one plate, pooled t-test
Scenario blocked_scenario();       ///< E2: 32/65, 32/63, 33/63
Scenario confounded_scenario();    ///< E3: 97/0, 0/95, 0/96
Scenario glycomics_scenario();     ///< E4: the 34 plates as executed
std::vector<Scenario> builtin_scenarios();
/// Looks up "E1".."E4" or a built-in name ("single-plate", ...).
std::optional<Scenario> find_builtin_scenario(std::string_view key);

struct SimGrid {
  std::vector<double> effect_sizes = default_effects();
  std::vector<double> sigma_b_values{3.6, 1.8, 0.9, 0.45};
  double sigma_e = 1.8;
  double alpha = 0.05;
  std::size_t n_reps = 1000;
  std::uint64_t seed = 20240101;

  static std::vector<double> default_effects();  ///< 0, 0.1, ..., 1.5
  void validate() const;
};

/// Draws for replicate r come from CounterStream(seed, r). Case slot c,
/// control slot c and plate k read fixed, disjoint indices of that stream,
/// so every scenario, batch SD and effect size sees the same underlying
/// normals for the same replicate (common random numbers).
CounterStream replicate_stream(std::uint64_t seed, std::size_t replicate);

/// y = effect * group + sigma_b * z_plate + sigma_e * eps. Samples are laid
/// out plate by plate, cases first; batch labels are plate numbers from 1.
LmmData generate_replicate(const Scenario& scenario, double effect, double sigma_b,
                           double sigma_e, const CounterStream& stream);

struct PowerPoint {
  double effect = 0.0;
  double power = 0.0;
  double mc_standard_error = 0.0;  ///< sqrt(power (1 - power) / n_reps)
  std::size_t n_rejected = 0;
  std::size_t n_failed = 0;  ///< fit errors or non-converged fits
  bool flagged = false;      ///< more than 1% of fits failed
};

struct PowerCurve {
  std::string scenario;
  double sigma_b = 0.0;
  std::vector<PowerPoint> points;
};

struct RunOptions {
  unsigned threads = 0;  ///< 0: hardware concurrency
  LmmOptions lmm;
};

/// One curve per grid.sigma_b_values entry. Failed fits are left out of
/// both numerator and denominator of the rejection fraction. The output is
/// identical for any thread count.
std::vector<PowerCurve> run_power(const Scenario& scenario, const SimGrid& grid,
                                  const RunOptions& options = {});

bool any_flagged(const std::vector<PowerCurve>& curves);

/// Normal-approximation power of the two-sided two-sample test.
double analytic_power_ols(double effect, std::size_t n1, std::size_t n2, double sigma,
                          double alpha);

enum class CurveFormat { csv, svg };

/// CSV columns: scenario, sigma_b, effect, power, mc_se.
std::string curves_to_csv(const std::vector<PowerCurve>& curves);
std::vector<PowerCurve> parse_curves_csv(std::string_view text);
/// Single-panel line chart, effect on x, power in [0, 1] on y.
std::string curves_to_svg(const std::vector<PowerCurve>& curves,
                          std::string_view title = "Power");
void emit_curves(const std::vector<PowerCurve>& curves, const std::filesystem::path& path,
                 CurveFormat format);

}  // namespace omicsprep
