#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hlplan/learner.hpp"
#include "hlplan/planner.hpp"
#include "hlplan/synth.hpp"
#include "hlplan/types.hpp"

namespace hlplan {

enum class Experiment { Exp1 = 1, Exp2 = 2, Exp3 = 3 };

struct ExperimentConfig {
  TessellationConfig tess;
  CostConfig cost;
  MetricConfig metric;
  FitConfig fit;
  ForestHyper forest_hyper;
  double dt = 0.1;
};

struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<std::vector<long>> counts;  // [ground truth][prediction]
  std::vector<double> precision;
  std::vector<double> recall;
  double overall_accuracy = 0.0;
  long total = 0;
};

ConfusionMatrix make_confusion(const std::vector<std::string>& classes,
                               const std::vector<std::pair<int, int>>& gt_pred);

/// Histogram with fixed 0.25-wide bins starting at zero.
std::vector<long> histogram(const std::vector<double>& values, double bin_width = 0.25);

struct EvalReport {
  std::vector<std::string> sample_ids;
  std::vector<double> min_dist;  // per sample, Eq-style minimal candidate distance
  std::vector<double> min_cost;  // distance of the cost-selected candidate
  std::vector<Maneuver> labels;
  std::vector<Maneuver> decisions;
  std::vector<double> all_dist;  // pooled candidate distances over all samples
  double mean_min_dist = 0.0;
  double mean_min_cost = 0.0;
  double mean_all_dist = 0.0;
  std::vector<long> hist_all_dist;
  std::vector<long> hist_min_dist;
  std::vector<long> hist_min_cost;
  ConfusionMatrix confusion;
};

nlohmann::json report_to_json(const EvalReport& report);
nlohmann::json confusion_to_json(const ConfusionMatrix& cm);

/// Stratified random split without replacement; counts are per class in
/// {LLC, RLC, CF} order. Deterministic under the seed.
std::pair<std::vector<HumanDrivingSample>, std::vector<HumanDrivingSample>> split(
    const std::vector<HumanDrivingSample>& samples, const std::array<int, 3>& train_counts,
    const std::array<int, 3>& test_counts, std::uint64_t seed);

/// Planning mode implied by the experiment; Exp1 resolves the target lane per
/// sample from its label.
PlanningMode experiment_mode(Experiment exp);

bool variant_legal(Experiment exp, CostVariant variant);

/// Evaluates a trained model on a sample set under the experiment's premise.
EvalReport evaluate_model(const PlannerModel& model,
                          const std::vector<HumanDrivingSample>& samples, Experiment exp);

struct ExperimentResult {
  PlannerModel model;
  FitResult fit;
  EvalReport train_report;
  EvalReport test_report;
};

/// Trains the forest if needed, builds the cache, fits the weights with the
/// corpus normalizers frozen into the model, and evaluates both splits.
ExperimentResult run_experiment(Experiment exp, CostVariant variant,
                                const std::vector<HumanDrivingSample>& train,
                                const std::vector<HumanDrivingSample>& test,
                                const ExperimentConfig& cfg, std::uint64_t seed);

/// Trains a standalone lane-decision forest on the train split.
ForestModel train_decision_forest(const std::vector<HumanDrivingSample>& train,
                                  DecisionPool pool, const ExperimentConfig& cfg,
                                  std::uint64_t seed);

/// Argmax-probability decisions against labels; TwoWay models score LLC and
/// RLC labels as LC.
ConfusionMatrix evaluate_forest(const ForestModel& model,
                                const std::vector<HumanDrivingSample>& test,
                                const CostConfig& cost_cfg);

struct SweepRow {
  int K = 1;
  double loss = 0.0;
  double train_decision_oa = 0.0;
};

/// f0 fits for ascending K, each warm-started from the previous optimum with
/// the new power block zeroed. Uses the Exp3 (three-way) premise.
std::vector<SweepRow> sweep_k(const std::vector<HumanDrivingSample>& train,
                              const std::vector<int>& k_values,
                              const ExperimentConfig& cfg);

struct UnbalancedStudyResult {
  EvalReport train_report;
  EvalReport test_report;
};

/// Re-runs Exp3/f0 on a dataset whose CF share is scaled by cf_multiplier in
/// both splits.
UnbalancedStudyResult unbalanced_study(const SynthConfig& synth_cfg,
                                       const ExperimentConfig& cfg,
                                       const std::array<int, 3>& train_counts,
                                       const std::array<int, 3>& test_counts,
                                       double cf_multiplier, std::uint64_t seed);

}  // namespace hlplan
