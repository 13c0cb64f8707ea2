#include <benchmark/benchmark.h>

#include <cmath>

#include "omicsprep/closure_bias.hpp"
#include "omicsprep/design.hpp"
#include "omicsprep/lmm.hpp"
#include "omicsprep/powersim.hpp"
#include "omicsprep/rng.hpp"
#include "omicsprep/transforms.hpp"

namespace {

using namespace omicsprep;

FeatureMatrix positive_matrix(std::size_t n, std::size_t p) {
  PhiloxEngine rng(1, 0);
  std::vector<double> v(n * p);
  for (auto& x : v) x = std::exp(rng.normal());
  return FeatureMatrix(n, p, std::move(v), numbered_labels("s", n), numbered_labels("f", p));
}

void BM_FitLmmGlycomics(benchmark::State& state) {
  const auto data =
      generate_replicate(glycomics_scenario(), 0.75, 1.8, 1.8, replicate_stream(1, 0));
  for (auto _ : state) benchmark::DoNotOptimize(fit_lmm(data));
}
BENCHMARK(BM_FitLmmGlycomics);

void BM_FitOlsSinglePlate(benchmark::State& state) {
  const auto data =
      generate_replicate(single_plate_scenario(), 0.75, 0.0, 1.8, replicate_stream(1, 0));
  for (auto _ : state) benchmark::DoNotOptimize(fit_ols(data.y, data.group));
}
BENCHMARK(BM_FitOlsSinglePlate);

void BM_GenerateReplicate(benchmark::State& state) {
  const auto scenario = glycomics_scenario();
  std::size_t r = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_replicate(scenario, 0.5, 1.8, 1.8, replicate_stream(1, r++)));
  }
}
BENCHMARK(BM_GenerateReplicate);

void BM_PowerCell(benchmark::State& state) {
  SimGrid grid;
  grid.effect_sizes = {0.75};
  grid.sigma_b_values = {1.8};
  grid.n_reps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_power(blocked_scenario(), grid, {1, {}}));
  }
}
BENCHMARK(BM_PowerCell)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ClosureBias(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(closure_bias_experiment(3, 10000, 1));
}
BENCHMARK(BM_ClosureBias)->Unit(benchmark::kMillisecond);

void BM_Quantile(benchmark::State& state) {
  const auto m = positive_matrix(static_cast<std::size_t>(state.range(0)), 500);
  for (auto _ : state) benchmark::DoNotOptimize(quantile(m));
}
BENCHMARK(BM_Quantile)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_BlockRandomize(benchmark::State& state) {
  SampleRoster roster;
  for (std::size_t i = 0; i < 288; ++i) {
    roster.sample_ids.push_back("s" + std::to_string(i));
    roster.group.push_back(i < 97 ? "case" : "control");
  }
  for (auto _ : state) benchmark::DoNotOptimize(block_randomize(roster, 3, 1));
}
BENCHMARK(BM_BlockRandomize);

}  // namespace
BENCHMARK_MAIN();
