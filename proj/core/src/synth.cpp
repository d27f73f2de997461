#include "hlplan/synth.hpp"

#include <cmath>
#include <random>

namespace hlplan {

namespace {

DrivingSituation draw_situation(const SynthConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  DrivingSituation sit;
  sit.ego.vs = cfg.ego_speed_min + uni(rng) * (cfg.ego_speed_max - cfg.ego_speed_min);

  const double r = uni(rng);
  sit.road = r < cfg.road_probs[0] ? -1 : (r < cfg.road_probs[0] + cfg.road_probs[1] ? 0 : 1);

  for (SlotId id : kAllSlots) {
    const Lane lane = (id == SlotId::LF || id == SlotId::LB)   ? Lane::Left
                      : (id == SlotId::RF || id == SlotId::RB) ? Lane::Right
                                                               : Lane::Current;
    // Draw uniformly regardless of occupancy so the rng stream stays aligned
    // across scenarios with different road flags.
    const double u_present = uni(rng);
    const double u_gap = uni(rng);
    const double u_rel = uni(rng);
    const double u_lat = uni(rng);
    if (!sit.lane_exists(lane)) continue;
    const bool front = is_front_slot(id);
    const double presence = front ? cfg.front_presence_prob : cfg.back_presence_prob;
    if (u_present >= presence) continue;

    FrenetState st;
    const double gap_min = front ? cfg.front_gap_min : cfg.back_gap_min;
    const double gap_max = front ? cfg.front_gap_max : cfg.back_gap_max;
    const double gap = gap_min + u_gap * (gap_max - gap_min);
    st.s = front ? gap : -gap;
    const double center = lane == Lane::Left ? 3.5 : (lane == Lane::Right ? -3.5 : 0.0);
    st.d = center + (2.0 * u_lat - 1.0) * cfg.lateral_jitter;
    st.vs = std::max(0.0, sit.ego.vs + cfg.rel_speed_min +
                              u_rel * (cfg.rel_speed_max - cfg.rel_speed_min));
    sit.slot(id) = st;
  }
  return sit;
}

/// Threshold rule: leave the current lane only when the front vehicle is
/// clearly slower and a neighbour lane offers a faster front vehicle with an
/// acceptable rear gap.
Lane preferred_lane(const DrivingSituation& sit, const OracleConfig& oracle,
                    const CostConfig& cost_cfg, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, 1.0);
  auto jitter = [&]() {
    return oracle.rule_noise_std > 0.0 ? oracle.rule_noise_std * noise(rng) : 0.0;
  };

  auto front_rel = [&](SlotId id) {
    const auto& st = sit.slot(id);
    return st ? st->vs - sit.ego.vs : cost_cfg.virtual_speed;
  };
  auto back_gap = [&](SlotId id) {
    const auto& st = sit.slot(id);
    return st ? std::abs(st->s) : cost_cfg.virtual_distance;
  };

  const double cf_rel = front_rel(SlotId::CF);
  if (cf_rel >= -1.0 + jitter()) return Lane::Current;

  double best_score = 0.0;
  Lane best = Lane::Current;
  if (sit.lane_exists(Lane::Left)) {
    const double gain = front_rel(SlotId::LF) - cf_rel + jitter();
    if (gain >= oracle.rule_gain_threshold &&
        back_gap(SlotId::LB) >= oracle.rule_gap_threshold + jitter() &&
        gain > best_score) {
      best_score = gain;
      best = Lane::Left;
    }
  }
  if (sit.lane_exists(Lane::Right)) {
    const double gain = front_rel(SlotId::RF) - cf_rel + jitter();
    if (gain >= oracle.rule_gain_threshold &&
        back_gap(SlotId::RB) >= oracle.rule_gap_threshold + jitter() &&
        gain > best_score) {
      best_score = gain;
      best = Lane::Right;
    }
  }
  return best;
}

}  // namespace

std::vector<HumanDrivingSample> synthesize_dataset(const SynthConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  CostConfig cost_cfg;  // defaults; the oracle works on raw base terms
  std::array<int, 3> needed = cfg.label_mix;  // {LLC, RLC, CF}
  const long total = static_cast<long>(needed[0]) + needed[1] + needed[2];
  const long max_attempts = total * static_cast<long>(cfg.max_attempts_per_sample);

  std::vector<HumanDrivingSample> samples;
  samples.reserve(static_cast<std::size_t>(total));
  long attempts = 0;
  while (needed[0] + needed[1] + needed[2] > 0) {
    if (++attempts > max_attempts)
      throw DataError("synthesize_dataset: could not reach the requested label mix");

    const DrivingSituation sit = draw_situation(cfg, rng);
    std::vector<Candidate> candidates;
    try {
      candidates = generate_candidates(sit, cfg.tess, PlanningMode::three_way(), cfg.dt);
    } catch (const DataError&) {
      continue;
    }

    Lane rule_lane = Lane::Current;
    if (cfg.oracle.lane_rule) rule_lane = preferred_lane(sit, cfg.oracle, cost_cfg, rng);

    std::size_t best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      const auto bases = compute_base_costs(candidates[j], sit, cost_cfg);
      double c = 0.0;
      for (std::size_t t = 0; t < kNumBaseCosts; ++t) c += cfg.oracle.weights[t] * bases[t];
      if (cfg.oracle.lane_rule && candidates[j].traj.target_lane != rule_lane)
        c += cfg.oracle.rule_penalty;
      if (c < best_cost) {
        best_cost = c;
        best = j;
      }
    }

    const Maneuver label = lane_to_maneuver(candidates[best].traj.target_lane);
    int& slots_left = needed[static_cast<std::size_t>(label)];
    if (slots_left == 0) continue;
    --slots_left;

    HumanDrivingSample sample;
    sample.id = "synth-" + std::to_string(samples.size());
    sample.situation = sit;
    sample.label = label;
    sample.gt = candidates[best].traj;
    if (cfg.noise_std > 0.0) {
      // The initial point stays exact so it still matches the ego state.
      for (std::size_t k = 1; k < sample.gt.points.size(); ++k) {
        sample.gt.points[k].s += cfg.noise_std * gauss(rng);
        sample.gt.points[k].d += cfg.noise_std * gauss(rng);
      }
    }
    samples.push_back(std::move(sample));
  }
  return samples;
}

}  // namespace hlplan
