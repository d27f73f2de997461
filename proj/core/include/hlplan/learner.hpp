#pragma once

#include <optional>
#include <vector>

#include "hlplan/costs.hpp"
#include "hlplan/forest.hpp"
#include "hlplan/metric.hpp"
#include "hlplan/trajgen.hpp"
#include "hlplan/types.hpp"

namespace hlplan {

/// Per-candidate cost vector and distance to the sample's ground truth;
/// both are independent of the weights and computed once.
struct CachedCandidate {
  CostVector costs;
  double distance = 0.0;
};

struct SampleCache {
  CostVariant variant = CostVariant::F0;
  int K = 1;
  std::vector<std::vector<CachedCandidate>> samples;
  // Normalizers computed from this corpus (mean absolute base term).
  std::array<double, kNumBaseCosts> normalizers = {1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
};

struct FitConfig {
  int max_iterations = 500;
  double gradient_tolerance = 1e-6;
  int history_size = 10;
  // Empty: start from zeros (uniform softmax). Otherwise warm start.
  std::optional<std::vector<double>> warm_start;
  // After convergence the weights are rescaled to a moderate max-norm and
  // refit; the result is kept only if the loss strictly improves. This lets
  // the search revisit the ranking once the softmax has saturated.
  int restart_rounds = 4;
  double restart_norm = 100.0;
};

struct FitResult {
  WeightVector weights;
  double loss = 0.0;
  int iterations = 0;
};

/// Softmax over negated costs, stabilized by subtracting the minimum cost.
std::vector<double> selection_probabilities(const std::vector<double>& costs);

/// Sum over samples of the softmax-expected distance to the ground truth.
double loss(const SampleCache& cache, const WeightVector& w);

/// Analytic gradient: sum_i sum_j P_j (sum_k d_k P_k - d_j) C_j, with the
/// per-sample expected distance computed once and reused. Deterministic
/// summation order.
std::vector<double> gradient(const SampleCache& cache, const WeightVector& w);

/// Generates candidates, costs and distances for every sample and computes
/// the corpus normalizers. With Kind::TargetLaneGiven each sample uses its own
/// ground-truth lane as the target. The forest is required for F2/F3.
SampleCache build_cache(const std::vector<HumanDrivingSample>& samples,
                        const PlanningMode& mode, CostVariant variant,
                        const TessellationConfig& tess_cfg, const CostConfig& cost_cfg,
                        const MetricConfig& metric_cfg, double dt,
                        const ForestModel* forest = nullptr);

/// Limited-memory BFGS with Armijo backtracking; each pass stops when the
/// max-norm of the gradient falls under the tolerance, and converged weights
/// are re-optimized from a rescaled copy while that improves the loss.
FitResult fit(const SampleCache& cache, const FitConfig& cfg);

}  // namespace hlplan
