#include <doctest.h>

#include <algorithm>
#include <set>

#include "hlplan/experiment.hpp"
#include "hlplan/io.hpp"
#include "helpers.hpp"

using namespace hlplan;

namespace {

std::vector<HumanDrivingSample> small_dataset(std::uint64_t seed,
                                              std::array<int, 3> mix = {8, 8, 10},
                                              double noise = 0.0) {
  SynthConfig cfg;
  cfg.label_mix = mix;
  cfg.seed = seed;
  cfg.noise_std = noise;
  return synthesize_dataset(cfg);
}

ExperimentConfig fast_config() {
  ExperimentConfig cfg;
  cfg.cost.K = 2;
  cfg.fit.max_iterations = 100;
  cfg.forest_hyper.n_trees = 15;
  cfg.forest_hyper.min_leaf_grid = {1, 4};
  return cfg;
}

}  // namespace

TEST_CASE("stratified split is exact, disjoint and deterministic") {
  const auto samples = small_dataset(2, {20, 20, 20});
  const auto [train, test] = split(samples, {12, 12, 12}, {5, 5, 5}, 9);
  CHECK(train.size() == 36);
  CHECK(test.size() == 15);

  std::set<std::string> seen;
  for (const auto& s : train) seen.insert(s.id);
  for (const auto& s : test) CHECK(seen.count(s.id) == 0);

  const auto [train2, test2] = split(samples, {12, 12, 12}, {5, 5, 5}, 9);
  for (std::size_t i = 0; i < train.size(); ++i) CHECK(train[i].id == train2[i].id);

  CHECK_THROWS_AS(split(samples, {20, 20, 20}, {1, 1, 1}, 0), DataError);
}

TEST_CASE("confusion matrices carry precision, recall and overall accuracy") {
  const ConfusionMatrix cm = make_confusion(
      {"CF", "LLC", "RLC"},
      {{0, 0}, {0, 0}, {0, 1}, {1, 1}, {1, 1}, {1, 0}, {2, 2}, {2, 2}, {2, 2}});
  CHECK(cm.total == 9);
  CHECK(cm.overall_accuracy == doctest::Approx(7.0 / 9.0));
  CHECK(cm.recall[0] == doctest::Approx(2.0 / 3.0));
  CHECK(cm.precision[0] == doctest::Approx(2.0 / 3.0));
  CHECK(cm.recall[2] == doctest::Approx(1.0));
  CHECK(cm.counts[0][1] == 1);
}

TEST_CASE("histograms use fixed-width bins from zero") {
  const auto bins = histogram({0.1, 0.2, 0.3, 0.6, 1.4}, 0.25);
  REQUIRE(bins.size() == 6);
  CHECK(bins[0] == 2);
  CHECK(bins[1] == 1);
  CHECK(bins[2] == 1);
  CHECK(bins[5] == 1);
}

TEST_CASE("variant legality matches the experiment premises") {
  CHECK(variant_legal(Experiment::Exp1, CostVariant::F0));
  CHECK_FALSE(variant_legal(Experiment::Exp1, CostVariant::F1));
  CHECK(variant_legal(Experiment::Exp2, CostVariant::F1));
  CHECK_FALSE(variant_legal(Experiment::Exp2, CostVariant::F2));
  CHECK(variant_legal(Experiment::Exp3, CostVariant::F3));
  const auto data = small_dataset(1);
  CHECK_THROWS_AS(run_experiment(Experiment::Exp1, CostVariant::F2, data, data,
                                 fast_config(), 0),
                  std::invalid_argument);
}

TEST_CASE("experiment one on clean data reaches zero minimal distance") {
  const auto samples = small_dataset(4);
  const auto [train, test] = split(samples, {5, 5, 6}, {3, 3, 4}, 1);
  const ExperimentResult res =
      run_experiment(Experiment::Exp1, CostVariant::F0, train, test, fast_config(), 0);
  CHECK(res.test_report.mean_min_dist == doctest::Approx(0.0).scale(1.0));
  CHECK(res.test_report.mean_min_cost >= res.test_report.mean_min_dist);
  // Exp1 is given the target lane, so its confusion is the 2x2 lane-change one.
  CHECK(res.test_report.confusion.classes == std::vector<std::string>{"LLC", "RLC"});
}

TEST_CASE("reports satisfy the MinDist/MinCost contract") {
  const auto samples = small_dataset(6, {8, 8, 10}, 0.1);
  const auto [train, test] = split(samples, {5, 5, 6}, {3, 3, 4}, 2);
  const ExperimentResult res =
      run_experiment(Experiment::Exp3, CostVariant::F0, train, test, fast_config(), 0);
  for (const EvalReport* rep : {&res.train_report, &res.test_report}) {
    REQUIRE(!rep->min_dist.empty());
    for (std::size_t i = 0; i < rep->min_dist.size(); ++i)
      CHECK(rep->min_dist[i] <= rep->min_cost[i] + 1e-12);
    CHECK(rep->mean_min_dist < rep->mean_all_dist);
    CHECK(rep->confusion.classes == std::vector<std::string>{"CF", "LLC", "RLC"});
  }
}

TEST_CASE("experiment three trains all four variants") {
  const auto samples = small_dataset(8, {10, 10, 12});
  const auto [train, test] = split(samples, {7, 7, 8}, {3, 3, 4}, 3);
  for (CostVariant v :
       {CostVariant::F0, CostVariant::F1, CostVariant::F2, CostVariant::F3}) {
    const ExperimentResult res =
        run_experiment(Experiment::Exp3, v, train, test, fast_config(), 1);
    CHECK(res.model.variant == v);
    CHECK(res.model.weights.weights.size() ==
          cost_vector_length(v, fast_config().cost.K));
    const bool wants_rf = v == CostVariant::F2 || v == CostVariant::F3;
    CHECK(res.model.forest.has_value() == wants_rf);
    CHECK(res.test_report.confusion.total == 10);
  }
}

TEST_CASE("the standalone forest harness evaluates decisions") {
  const auto samples = small_dataset(10, {12, 12, 14});
  const auto [train, test] = split(samples, {8, 8, 9}, {4, 4, 5}, 4);
  const ExperimentConfig cfg = fast_config();
  const ForestModel rf3 = train_decision_forest(train, DecisionPool::ThreeWay, cfg, 2);
  const ConfusionMatrix cm = evaluate_forest(rf3, test, cfg.cost);
  CHECK(cm.total == 13);
  CHECK(cm.classes.size() == 3);
  CHECK(cm.overall_accuracy >= 0.0);

  const ForestModel rf2 = train_decision_forest(train, DecisionPool::TwoWay, cfg, 2);
  const ConfusionMatrix cm2 = evaluate_forest(rf2, test, cfg.cost);
  CHECK(cm2.classes == std::vector<std::string>{"LC", "CF"});

  CHECK_THROWS_AS(evaluate_forest(rf3, {}, cfg.cost), DataError);
}

TEST_CASE("the K sweep is warm-started and non-increasing") {
  const auto samples = small_dataset(12);
  ExperimentConfig cfg = fast_config();
  const auto rows = sweep_k(samples, {1, 2, 3}, cfg);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].loss <= rows[i - 1].loss + 1e-9);

  // A single K equals a plain fit.
  const auto single = sweep_k(samples, {2}, cfg);
  ExperimentConfig k2 = cfg;
  k2.cost.K = 2;
  const SampleCache cache = build_cache(samples, PlanningMode::three_way(), CostVariant::F0,
                                        k2.tess, k2.cost, k2.metric, k2.dt);
  const FitResult plain = fit(cache, k2.fit);
  CHECK(single[0].loss == doctest::Approx(plain.loss).epsilon(1e-12));

  CHECK_THROWS_AS(sweep_k(samples, {3, 1}, cfg), std::invalid_argument);
}

TEST_CASE("the unbalanced study oversamples car following") {
  SynthConfig synth_cfg;
  synth_cfg.seed = 3;
  ExperimentConfig cfg = fast_config();
  const UnbalancedStudyResult res =
      unbalanced_study(synth_cfg, cfg, {5, 5, 6}, {3, 3, 4}, 2.0, 1);
  // Test split: 3 LLC + 3 RLC + 8 CF after doubling the CF count.
  CHECK(res.test_report.confusion.total == 14);
  CHECK(res.train_report.confusion.total == 22);
  CHECK_THROWS_AS(unbalanced_study(synth_cfg, cfg, {5, 5, 6}, {3, 3, 4}, 0.5, 1),
                  std::invalid_argument);
}
