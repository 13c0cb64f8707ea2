#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "omicsprep/error.hpp"
#include "omicsprep/powersim.hpp"
#include "test_util.hpp"

namespace omicsprep {
namespace {

TEST(Scenarios, BuiltinTotals) {
  for (const auto& s : builtin_scenarios()) {
    EXPECT_EQ(s.total_cases(), 97u) << s.name;
    EXPECT_EQ(s.total_controls(), 191u) << s.name;
  }
  EXPECT_EQ(single_plate_scenario().analysis, Analysis::ols);
  EXPECT_EQ(glycomics_scenario().plates.size(), 34u);
  EXPECT_EQ(find_builtin_scenario("E3")->name, confounded_scenario().name);
  EXPECT_EQ(find_builtin_scenario("glycomics")->plates.size(), 34u);
  EXPECT_FALSE(find_builtin_scenario("E9"));
}

TEST(Scenarios, Validation) {
  EXPECT_THROW((Scenario{"x", {}, Analysis::ols}.validate()), ConfigError);
  EXPECT_THROW((Scenario{"x", {{3, 0}}, Analysis::ols}.validate()), ConfigError);
  SimGrid g;
  g.effect_sizes = {0.5, 0.1};
  EXPECT_THROW(g.validate(), ConfigError);
  g = SimGrid{};
  g.alpha = 1.0;
  EXPECT_THROW(g.validate(), ConfigError);
  EXPECT_EQ(SimGrid::default_effects().size(), 16u);
}

TEST(Replicate, NoiselessGivesGroupIndicator) {
  const auto d = generate_replicate(blocked_scenario(), 1.0, 0.0, 0.0, replicate_stream(1, 0));
  ASSERT_EQ(d.y.size(), 288u);
  for (std::size_t i = 0; i < d.y.size(); ++i) {
    EXPECT_EQ(d.y[i], static_cast<double>(d.group[i]));
  }
}

TEST(Replicate, SinglePlateHasOneBatch) {
  const auto d = generate_replicate(single_plate_scenario(), 0.3, 1.8, 1.8,
                                    replicate_stream(1, 4));
  for (auto b : d.batch) EXPECT_EQ(b, 1u);
  std::size_t cases = 0;
  for (int g : d.group) cases += g;
  EXPECT_EQ(cases, 97u);
}

TEST(Replicate, CommonRandomNumbersAcrossEffects) {
  const auto stream = replicate_stream(5, 17);
  const auto a = generate_replicate(blocked_scenario(), 0.0, 1.8, 1.8, stream);
  const auto b = generate_replicate(blocked_scenario(), 0.7, 1.8, 1.8, stream);
  for (std::size_t i = 0; i < a.y.size(); ++i) {
    EXPECT_NEAR(b.y[i] - a.y[i], 0.7 * a.group[i], 1e-12);
  }
}

TEST(Replicate, GlycomicsVarianceDecomposition) {
  // With no group effect every plate mean has variance sigma_b^2 +
  // sigma_e^2 / n_k around 0; subtracting the within-plate part recovers
  // sigma_b^2.
  const auto scenario = glycomics_scenario();
  constexpr std::size_t reps = 2000;
  double between = 0.0;
  std::size_t terms = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto d = generate_replicate(scenario, 0.0, 1.8, 1.8, replicate_stream(2024, r));
    const std::size_t k_plates = scenario.plates.size();
    std::vector<double> sum(k_plates, 0.0), sq(k_plates, 0.0), count(k_plates, 0.0);
    for (std::size_t i = 0; i < d.y.size(); ++i) {
      const auto k = d.batch[i] - 1;
      sum[k] += d.y[i];
      sq[k] += d.y[i] * d.y[i];
      count[k] += 1.0;
    }
    double within_ss = 0.0, within_df = 0.0;
    for (std::size_t k = 0; k < k_plates; ++k) {
      within_ss += sq[k] - sum[k] * sum[k] / count[k];
      within_df += count[k] - 1.0;
    }
    const double within_var = within_ss / within_df;
    for (std::size_t k = 0; k < k_plates; ++k) {
      const double mean = sum[k] / count[k];
      between += mean * mean - within_var / count[k];
      ++terms;
    }
  }
  EXPECT_NEAR(between / static_cast<double>(terms), 3.24, 0.15 * 3.24);
}

TEST(Analytic, FrozenValues) {
  EXPECT_NEAR(analytic_power_ols(0.0, 97, 191, 1.8, 0.05), 0.05, 1e-12);
  EXPECT_NEAR(analytic_power_ols(0.45, 97, 191, 1.8, 0.05), 0.5180561464177602, 1e-12);
  EXPECT_NEAR(analytic_power_ols(1.5, 97, 191, 1.8, 0.05), 0.9999988429561804, 1e-12);
  EXPECT_NEAR(analytic_power_ols(50.0, 97, 191, 1.8, 0.05), 1.0, 1e-15);
  EXPECT_THROW(analytic_power_ols(1.0, 0, 5, 1.0, 0.05), ConfigError);
}

SimGrid small_grid() {
  SimGrid g;
  g.effect_sizes = {0.0, 0.5, 1.0};
  g.sigma_b_values = {1.8, 0.45};
  g.n_reps = 40;
  g.seed = 11;
  return g;
}

TEST(RunPower, ThreadCountDoesNotChangeResults) {
  const auto g = small_grid();
  RunOptions serial{1, {}}, parallel{4, {}};
  const auto a = run_power(glycomics_scenario(), g, serial);
  const auto b = run_power(glycomics_scenario(), g, parallel);
  EXPECT_EQ(curves_to_csv(a), curves_to_csv(b));
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].sigma_b, 1.8);
  ASSERT_EQ(a[0].points.size(), 3u);
  for (const auto& c : a) {
    for (const auto& p : c.points) {
      EXPECT_EQ(p.n_failed, 0u);
      EXPECT_FALSE(p.flagged);
      EXPECT_NEAR(p.mc_standard_error, std::sqrt(p.power * (1 - p.power) / 40.0), 1e-15);
    }
  }
}

TEST(RunPower, SinglePlateNullRate) {
  SimGrid g;
  g.effect_sizes = {0.0};
  g.sigma_b_values = {1.8};
  g.n_reps = 2000;
  const auto curves = run_power(single_plate_scenario(), g);
  const double rate = curves[0].points[0].power;
  EXPECT_GE(rate, 0.035);
  EXPECT_LE(rate, 0.065);
}

TEST(Curves, CsvShapeAndRoundTrip) {
  std::vector<PowerCurve> one{{"E1", 1.8, {PowerPoint{0.5, 0.25, 0.01, 5, 0, false}}}};
  const auto text = curves_to_csv(one);
  EXPECT_EQ(text, "scenario,sigma_b,effect,power,mc_se\nE1,1.8,0.5,0.25,0.01\n");

  const auto curves = run_power(blocked_scenario(), small_grid(), {1, {}});
  const auto parsed = parse_curves_csv(curves_to_csv(curves));
  ASSERT_EQ(parsed.size(), curves.size());
  for (std::size_t c = 0; c < curves.size(); ++c) {
    EXPECT_EQ(parsed[c].scenario, curves[c].scenario);
    EXPECT_EQ(parsed[c].sigma_b, curves[c].sigma_b);
    for (std::size_t k = 0; k < curves[c].points.size(); ++k) {
      EXPECT_EQ(parsed[c].points[k].power, curves[c].points[k].power);
      EXPECT_EQ(parsed[c].points[k].mc_standard_error, curves[c].points[k].mc_standard_error);
    }
  }
  EXPECT_THROW(parse_curves_csv("a,b\n"), ParseError);
  EXPECT_THROW(parse_curves_csv("scenario,sigma_b,effect,power,mc_se\nE1,x,0,0,0\n"),
               ParseError);
}

TEST(Curves, EmitFiles) {
  testing::TempDir dir;
  std::vector<PowerCurve> one{{"E1", 1.8, {PowerPoint{0.5, 0.25, 0.01, 5, 0, false}}}};
  emit_curves(one, dir.path() / "c.csv", CurveFormat::csv);
  std::ifstream in(dir.path() / "c.csv");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 2u);

  emit_curves(one, dir.path() / "c.svg", CurveFormat::svg);
  std::stringstream svg;
  svg << std::ifstream(dir.path() / "c.svg").rdbuf();
  EXPECT_NE(svg.str().find("<svg"), std::string::npos);
  EXPECT_NE(svg.str().find("</svg>"), std::string::npos);
  EXPECT_NE(svg.str().find("1.8"), std::string::npos);

  EXPECT_THROW(emit_curves({}, dir.path() / "none.csv", CurveFormat::csv), ConfigError);
}

}  // namespace
}  // namespace omicsprep
