#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hlplan/costs.hpp"
#include "hlplan/trajgen.hpp"
#include "hlplan/types.hpp"

namespace hlplan {

/// The scenario oracle that stands in for a human driver: a raw (unnormalized)
/// weighting over the base cost terms, optionally combined with a threshold
/// lane-preference rule so that decisions carry information beyond the
/// traditional terms.
struct OracleConfig {
  // lon_jerk, lat_jerk, lon_acc, lat_acc, c_v, c_safe, then 4 heuristic terms.
  std::array<double, kNumBaseCosts> weights = {0.5, 0.5, 1.0, 1.0, 1.0, 10.0, 0, 0, 0, 0};
  bool lane_rule = false;       // enable the threshold lane-preference rule
  double rule_penalty = 25.0;   // cost added to candidates toward non-preferred lanes
  double rule_noise_std = 0.0;  // per-sample jitter of the rule thresholds
  double rule_gain_threshold = 2.0;  // required front-speed advantage of the new lane
  double rule_gap_threshold = 15.0;  // required rear gap in the new lane
};

struct SynthConfig {
  OracleConfig oracle;

  // Scenario ranges.
  double ego_speed_min = 8.0;
  double ego_speed_max = 22.0;
  double front_presence_prob = 0.85;
  double back_presence_prob = 0.55;
  double front_gap_min = 8.0;
  double front_gap_max = 55.0;
  double back_gap_min = 8.0;
  double back_gap_max = 55.0;
  double rel_speed_min = -6.0;
  double rel_speed_max = 4.0;
  double lateral_jitter = 0.3;  // env vehicles' offset around their lane center
  // road flag draw probabilities for {-1, 0, 1}.
  std::array<double, 3> road_probs = {0.25, 0.5, 0.25};

  // Target sample counts per class, in {LLC, RLC, CF} order.
  std::array<int, 3> label_mix = {135, 135, 143};

  double noise_std = 0.0;  // zero-mean jitter on ground-truth positions
  std::uint64_t seed = 0;
  int max_attempts_per_sample = 400;

  TessellationConfig tess;
  double dt = 0.1;
};

/// Scenarios are drawn until the label mix is met; each ground truth is the
/// oracle's minimum-cost candidate from the full three-way set, jittered.
/// Deterministic under the seed.
std::vector<HumanDrivingSample> synthesize_dataset(const SynthConfig& cfg);

}  // namespace hlplan
