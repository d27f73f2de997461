#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "hlplan/costs.hpp"
#include "hlplan/types.hpp"

namespace hlplan {

/// 13 features: ego speed, then (|s_rel|, s_rel') for cf, cb, lf, lb, rf, rb.
using SituationDescriptor = std::array<double, 13>;
inline constexpr std::size_t kDescriptorSize = 13;

enum class DecisionPool { TwoWay = 2, ThreeWay = 3 };

/// Class indices: ThreeWay uses {LLC=0, CF=1, RLC=2}; TwoWay uses {LC=0, CF=1}.
int maneuver_to_class(Maneuver m, DecisionPool pool);
const char* class_name(int cls, DecisionPool pool);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::array<std::int64_t, 3> counts{};  // per-class sample counts (leaves)
};

struct ForestHyper {
  int n_trees = 100;
  std::vector<int> min_leaf_grid = {1, 2, 4, 8, 16, 32};
  int cv_folds = 5;
  double alpha = 0.01;   // Laplace smoothing of leaf histograms
  bool bootstrap = true;
  int features_per_split = 3;  // floor(sqrt(13))
};

struct ForestModel {
  DecisionPool pool = DecisionPool::ThreeWay;
  std::vector<std::vector<TreeNode>> trees;
  std::uint64_t seed = 0;
  int n_trees = 0;
  int min_samples_leaf = 1;
  double alpha = 0.01;

  std::size_t n_classes() const { return static_cast<std::size_t>(pool); }
};

/// Encodes a situation per the fixed feature order. Vehicles absent from an
/// existing lane become virtual ones far away and receding; a lane absent
/// altogether zeroes its two slot pairs.
SituationDescriptor encode_situation(const DrivingSituation& situation,
                                     const CostConfig& cfg);

/// Grows a bagged CART ensemble (Gini impurity, per-split feature
/// subsampling). min_samples_leaf is selected from hyper.min_leaf_grid by
/// cv_folds-fold cross-validated accuracy, ties broken toward larger leaves.
/// Deterministic given the seed.
ForestModel train_forest(
    const std::vector<std::pair<SituationDescriptor, int>>& samples,
    DecisionPool pool, const ForestHyper& hyper, std::uint64_t seed);

/// Smoothed leaf frequencies averaged over trees; strictly positive, sums to 1.
std::vector<double> predict_proba(const ForestModel& model,
                                  const SituationDescriptor& desc);

int predict_class(const ForestModel& model, const SituationDescriptor& desc);

/// -log P(decision | situation); TwoWay models map LLC/RLC onto LC.
double rf_incentive_cost(const ForestModel& model, const DrivingSituation& situation,
                         Maneuver decision, const CostConfig& cfg);

}  // namespace hlplan
