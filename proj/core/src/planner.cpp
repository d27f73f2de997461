#include "hlplan/planner.hpp"

#include <cmath>

#include "hlplan/learner.hpp"

namespace hlplan {

Maneuver deduce_decision(const Trajectory& traj, double lane_width) {
  if (traj.points.empty()) throw std::invalid_argument("deduce_decision: empty trajectory");
  const double d_end = traj.points.back().d;
  if (std::abs(d_end - lane_width) < 0.5) return Maneuver::LLC;
  if (std::abs(d_end + lane_width) < 0.5) return Maneuver::RLC;
  if (std::abs(d_end) < 0.5) return Maneuver::CF;
  throw DataError("deduce_decision: no lane center within tolerance of terminal offset");
}

ScoredCandidates score_candidates(const DrivingSituation& situation,
                                  const PlannerModel& model, const PlanningMode& mode) {
  const bool wants_rf = model.variant == CostVariant::F2 || model.variant == CostVariant::F3;
  if (wants_rf && !model.forest)
    throw std::invalid_argument("score_candidates: model variant requires a forest");

  ScoredCandidates out;
  out.candidates = generate_candidates(situation, model.tess_cfg, mode, model.dt);
  out.costs.reserve(out.candidates.size());
  for (const Candidate& c : out.candidates) {
    const auto bases = compute_base_costs(c, situation, model.cost_cfg);
    std::optional<double> rf;
    if (wants_rf) {
      rf = rf_incentive_cost(*model.forest, situation,
                             lane_to_maneuver(c.traj.target_lane), model.cost_cfg);
    }
    const CostVector cv = assemble_cost_vector(bases, model.cost_cfg, model.variant, rf);
    out.costs.push_back(total_cost(cv, model.weights));
  }
  out.probabilities = selection_probabilities(out.costs);

  out.argmin = 0;
  for (std::size_t j = 1; j < out.costs.size(); ++j) {
    if (out.costs[j] < out.costs[out.argmin]) out.argmin = j;
  }
  return out;
}

PlanResult plan(const DrivingSituation& situation, const PlannerModel& model,
                const PlanningMode& mode) {
  ScoredCandidates scored = score_candidates(situation, model, mode);
  PlanResult result;
  result.selected_index = scored.argmin;
  result.trajectory = scored.candidates[scored.argmin].traj;
  result.decision = deduce_decision(result.trajectory, model.tess_cfg.d_lane);
  result.costs = std::move(scored.costs);
  result.probabilities = std::move(scored.probabilities);
  return result;
}

}  // namespace hlplan
