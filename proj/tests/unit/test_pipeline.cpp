#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "omicsprep/closure_bias.hpp"
#include "omicsprep/error.hpp"
#include "omicsprep/pipeline.hpp"
#include "omicsprep/serialize.hpp"
#include "test_util.hpp"

namespace omicsprep {
namespace {

using testing::random_positive;

TEST(Pipeline, EqualsManualComposition) {
  const auto in = random_positive(6, 4, 2);
  const auto result = apply_pipeline(in, Pipeline({LogShift{1.0}, UnitSdScale{}}));
  EXPECT_EQ(result.matrix, unit_sd_scale(log_shift(in, 1.0)));
  ASSERT_EQ(result.audit.size(), 2u);
  EXPECT_EQ(result.audit[0].kind, "log_shift");
  EXPECT_EQ(result.audit[1].kind, "unit_sd_scale");
  EXPECT_EQ(result.audit[1].fitted.at(0).first, "column_sd");
  EXPECT_TRUE(result.warnings.empty());
}

TEST(Pipeline, ScalingBeforeLogWarns) {
  const auto in = random_positive(6, 4, 2);
  for (TransformStep scaling : {TransformStep{UnitSdScale{}}, TransformStep{ParetoScale{}},
                                TransformStep{MedianIqrScale{}}}) {
    const Pipeline p({scaling, LogShift{100.0}});
    const auto result = apply_pipeline(in, p);
    ASSERT_EQ(result.warnings.size(), 1u);
    EXPECT_NE(result.warnings[0].find("order"), std::string::npos);
  }
}

TEST(Pipeline, EmptyIsIdentity) {
  const auto in = random_positive(3, 3, 1);
  const auto result = apply_pipeline(in, Pipeline{});
  EXPECT_EQ(result.matrix, in);
  EXPECT_TRUE(result.audit.empty());
}

TEST(Pipeline, ErrorCarriesStepIndex) {
  const auto in = testing::make_matrix(2, 2, {1, -3, 2, 2});
  try {
    apply_pipeline(in, Pipeline({Closure{}, LogShift{0.0}}));
    FAIL();
  } catch (const TransformError& e) {
    ASSERT_TRUE(e.has_step());
    EXPECT_EQ(e.step_index(), 0u);
  }
  try {
    apply_pipeline(in, Pipeline({LagDiff{}, LogShift{0.0}}));
    FAIL();
  } catch (const TransformError& e) {
    EXPECT_EQ(e.step_index(), 1u);
  }
}

TEST(PipelineJson, ParsesEveryKind) {
  const auto p = pipeline_from_json(R"([
    {"kind": "log_shift", "params": {"a": 2}},
    {"kind": "unit_sd_scale", "params": {"center": true}},
    {"kind": "pareto_scale"},
    {"kind": "median_iqr_scale"},
    {"kind": "closure"},
    {"kind": "max_peak", "params": {"mode": "mean_spectrum_location"}},
    {"kind": "lag_diff"},
    {"kind": "quantile"},
    {"kind": "binarize", "params": {"thresholds": [0.5, 1]}}
  ])");
  ASSERT_EQ(p.steps().size(), 9u);
  EXPECT_EQ(std::get<LogShift>(p.steps()[0]).shift, 2.0);
  EXPECT_TRUE(std::get<UnitSdScale>(p.steps()[1]).center);
  EXPECT_EQ(std::get<MaxPeak>(p.steps()[5]).mode, MaxPeakMode::mean_spectrum_location);
  EXPECT_EQ(std::get<Binarize>(p.steps()[8]).thresholds, (std::vector<double>{0.5, 1}));

  // Serialising and parsing again gives the same step list.
  const auto again = pipeline_from_json(pipeline_to_json(p));
  EXPECT_EQ(pipeline_to_json(again), pipeline_to_json(p));
}

TEST(PipelineJson, Defaults) {
  const auto p = pipeline_from_json(R"([{"kind":"log_shift"},{"kind":"unit_sd_scale"}])");
  EXPECT_EQ(std::get<LogShift>(p.steps()[0]).shift, 1.0);
  EXPECT_FALSE(std::get<UnitSdScale>(p.steps()[1]).center);
}

TEST(PipelineJson, Errors) {
  EXPECT_THROW(pipeline_from_json("[{\"kind\": "), ParseError);
  EXPECT_THROW(pipeline_from_json(R"({"kind":"closure"})"), ConfigError);
  EXPECT_THROW(pipeline_from_json(R"([{"kind":"boxcox"}])"), ConfigError);
  EXPECT_THROW(pipeline_from_json(R"([{"kind":"closure","params":{"x":1}}])"), ConfigError);
  EXPECT_THROW(pipeline_from_json(R"([{"kind":"log_shift","params":{"a":"one"}}])"),
               ConfigError);
  EXPECT_THROW(pipeline_from_json(R"([{"kind":"binarize","params":{}}])"), ConfigError);
}

TEST(AuditJson, RecordsFittedStatistics) {
  const auto in = random_positive(5, 3, 8);
  const auto result = apply_pipeline(in, Pipeline({Quantile{}, UnitSdScale{}, LogShift{5.0}}));
  const auto j = nlohmann::json::parse(audit_to_json(result));
  ASSERT_EQ(j["steps"].size(), 3u);
  EXPECT_EQ(j["steps"][0]["kind"], "quantile");
  EXPECT_EQ(j["steps"][0]["fitted"]["reference"].size(), 3u);
  EXPECT_EQ(j["warnings"].size(), 1u);
}

TEST(ClosureBias, ThreeVariablesGiveMinusHalf) {
  const auto r = closure_bias_experiment(3, 10000, 1);
  EXPECT_NEAR(r.mean_offdiag_before, 0.0, 0.03);
  EXPECT_NEAR(r.mean_offdiag_after, -0.5, 0.05);
  for (std::size_t a = 0; a < 3; ++a) {
    EXPECT_EQ(r.corr_after[a * 3 + a], 1.0);
    for (std::size_t b = 0; b < 3; ++b) {
      EXPECT_NEAR(r.corr_after[a * 3 + b], r.corr_after[b * 3 + a], 1e-12);
    }
  }
}

TEST(ClosureBias, TwoVariablesAreExactlyAnticorrelated) {
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    const auto r = closure_bias_experiment(2, 100 + seed, seed);
    EXPECT_NEAR(r.corr_after[1], -1.0, 1e-9);
  }
}

TEST(ClosureBias, TenVariablesApproachMinusOneNinth) {
  const auto r = closure_bias_experiment(10, 50000, 5);
  EXPECT_NEAR(r.mean_offdiag_after, -1.0 / 9.0, 0.05);
}

TEST(ClosureBias, Preconditions) {
  EXPECT_THROW(closure_bias_experiment(1, 1000, 1), ConfigError);
  EXPECT_THROW(closure_bias_experiment(3, 99, 1), ConfigError);
}

}  // namespace
}  // namespace omicsprep
