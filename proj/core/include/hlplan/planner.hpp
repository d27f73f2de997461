#pragma once

#include <optional>
#include <vector>

#include "hlplan/costs.hpp"
#include "hlplan/forest.hpp"
#include "hlplan/metric.hpp"
#include "hlplan/trajgen.hpp"
#include "hlplan/types.hpp"

namespace hlplan {

/// Everything needed to run the planner: learned weights, frozen normalizers
/// inside cost_cfg, generation settings and (for f2/f3) the forest.
struct PlannerModel {
  CostVariant variant = CostVariant::F0;
  WeightVector weights;
  CostConfig cost_cfg;
  TessellationConfig tess_cfg;
  MetricConfig metric_cfg;
  double dt = 0.1;
  std::optional<ForestModel> forest;
};

struct PlanResult {
  Trajectory trajectory;
  Maneuver decision = Maneuver::CF;
  std::size_t selected_index = 0;
  std::vector<double> costs;          // total cost per candidate
  std::vector<double> probabilities;  // softmax selection probabilities
};

/// Maneuver implied by the trajectory's terminal lateral offset; each lane
/// center is matched within 0.5 m.
Maneuver deduce_decision(const Trajectory& traj, double lane_width = kDefaultLaneWidth);

/// Candidate set plus scores; used by both plan() and the evaluation harness.
struct ScoredCandidates {
  std::vector<Candidate> candidates;
  std::vector<double> costs;
  std::vector<double> probabilities;
  std::size_t argmin = 0;
};

ScoredCandidates score_candidates(const DrivingSituation& situation,
                                  const PlannerModel& model, const PlanningMode& mode);

/// Generates, scores and selects the minimum-cost candidate; exact ties go to
/// the lowest generation index.
PlanResult plan(const DrivingSituation& situation, const PlannerModel& model,
                const PlanningMode& mode);

}  // namespace hlplan
