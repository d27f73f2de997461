// Shared fixtures for the unit and acceptance suites.
#pragma once

#include <random>

#include "hlplan/trajgen.hpp"
#include "hlplan/types.hpp"

namespace hlplan::testing {

inline DrivingSituation middle_lane_situation(double ego_vs = 15.0) {
  DrivingSituation s;
  s.ego = {0.0, 0.0, ego_vs, 0.0, 0.0, 0.0};
  s.road = 0;
  s.slot(SlotId::CF) = FrenetState{30.0, 0.0, 13.0, 0.0, 0.0, 0.0};
  s.slot(SlotId::LB) = FrenetState{-20.0, 3.5, 16.0, 0.0, 0.0, 0.0};
  s.slot(SlotId::RF) = FrenetState{40.0, -3.5, 14.0, 0.0, 0.0, 0.0};
  return s;
}

// A well-formed sample whose ground truth is an exact candidate trajectory.
inline HumanDrivingSample candidate_sample(Lane lane = Lane::Current,
                                           double ego_vs = 15.0) {
  HumanDrivingSample sample;
  sample.situation = middle_lane_situation(ego_vs);
  auto cands = generate_candidates(sample.situation, TessellationConfig{},
                                   PlanningMode::target_lane(lane), 0.1);
  sample.gt = cands[cands.size() / 2].traj;
  sample.label = lane_to_maneuver(lane);
  sample.id = "fixture-0";
  return sample;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + std::uniform_real_distribution<double>(0.0, 1.0)(rng) * (hi - lo);
}

}  // namespace hlplan::testing
