#include <benchmark/benchmark.h>

#include "hlplan/costs.hpp"
#include "hlplan/learner.hpp"
#include "hlplan/synth.hpp"
#include "hlplan/trajgen.hpp"

namespace {

using namespace hlplan;

DrivingSituation middle_lane_situation() {
  DrivingSituation s;
  s.ego = {0.0, 0.0, 15.0, 0.0, 0.0, 0.0};
  s.road = 0;
  s.slot(SlotId::CF) = FrenetState{30.0, 0.0, 13.0, 0.0, 0.0, 0.0};
  s.slot(SlotId::LB) = FrenetState{-20.0, 3.5, 16.0, 0.0, 0.0, 0.0};
  return s;
}

void BM_GenerateCandidates(benchmark::State& state) {
  DrivingSituation s = middle_lane_situation();
  TessellationConfig tess;
  for (auto _ : state) {
    auto cands = generate_candidates(s, tess, PlanningMode::three_way(), 0.1);
    benchmark::DoNotOptimize(cands);
  }
}
BENCHMARK(BM_GenerateCandidates);

void BM_BaseCosts(benchmark::State& state) {
  DrivingSituation s = middle_lane_situation();
  TessellationConfig tess;
  auto cands = generate_candidates(s, tess, PlanningMode::three_way(), 0.1);
  CostConfig cfg;
  for (auto _ : state) {
    double acc = 0.0;
    for (const Candidate& c : cands) acc += compute_base_costs(c, s, cfg)[kSafety];
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_BaseCosts);

void BM_LossAndGradient(benchmark::State& state) {
  SynthConfig cfg;
  cfg.label_mix = {10, 10, 10};
  cfg.seed = 7;
  auto samples = synthesize_dataset(cfg);
  SampleCache cache = build_cache(samples, PlanningMode::three_way(), CostVariant::F0,
                                  cfg.tess, CostConfig{}, MetricConfig{}, cfg.dt);
  WeightVector w{CostVariant::F0, std::vector<double>(cost_vector_length(CostVariant::F0, 5), 0.1)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(loss(cache, w));
    auto g = gradient(cache, w);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_LossAndGradient);

}  // namespace

BENCHMARK_MAIN();
