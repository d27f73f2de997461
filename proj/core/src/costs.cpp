#include "hlplan/costs.hpp"

#include <cmath>
#include <cstddef>

namespace hlplan {

namespace {

// Trapezoidal rule on a uniform grid.
double trapezoid(const std::vector<double>& values, double dt) {
  if (values.size() < 2) return 0.0;
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  return sum * dt;
}

std::pair<SlotId, SlotId> lane_slots(Lane lane) {
  switch (lane) {
    case Lane::Left: return {SlotId::LF, SlotId::LB};
    case Lane::Right: return {SlotId::RF, SlotId::RB};
    case Lane::Current: return {SlotId::CF, SlotId::CB};
  }
  return {SlotId::CF, SlotId::CB};
}

}  // namespace

const char* variant_name(CostVariant v) {
  switch (v) {
    case CostVariant::F0: return "f0";
    case CostVariant::F1: return "f1";
    case CostVariant::F2: return "f2";
    case CostVariant::F3: return "f3";
  }
  return "?";
}

CostVariant variant_from_name(const std::string& name) {
  if (name == "f0" || name == "F0") return CostVariant::F0;
  if (name == "f1" || name == "F1") return CostVariant::F1;
  if (name == "f2" || name == "F2") return CostVariant::F2;
  if (name == "f3" || name == "F3") return CostVariant::F3;
  throw DataError("unknown cost variant: " + name);
}

std::size_t cost_vector_length(CostVariant variant, int K) {
  const auto k = static_cast<std::size_t>(K);
  switch (variant) {
    case CostVariant::F0: return kNumTradCosts * k;
    case CostVariant::F1: return (kNumTradCosts + kNumHeuCosts) * k;
    case CostVariant::F2:
    case CostVariant::F3: return kNumTradCosts * k + 1;
  }
  return 0;
}

std::vector<EnvTrack> predict_env(const DrivingSituation& situation, double tau,
                                  double dt) {
  if (!(tau > 0.0)) throw std::invalid_argument("predict_env: tau must be positive");
  const auto n = static_cast<std::size_t>(std::floor(tau / dt + 1e-9));

  std::vector<EnvTrack> tracks;
  for (SlotId id : kAllSlots) {
    const auto& st = situation.slot(id);
    if (!st) continue;
    EnvTrack tr;
    tr.slot = id;
    tr.s0 = st->s;
    tr.d0 = st->d;
    tr.speed = st->vs;
    tr.points.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      const double t = static_cast<double>(k) * dt;
      tr.points.push_back({st->s + st->vs * t, st->d});
    }
    tracks.push_back(std::move(tr));
  }
  return tracks;
}

ComfortCosts comfort_costs(const Trajectory& traj, const PolynomialPair* poly) {
  const std::size_t n = traj.points.size();
  if (n < 3) throw std::invalid_argument("comfort_costs: need at least 3 points");
  const double dt = traj.dt;
  const double tau = traj.duration();

  std::vector<double> lon_jerk(n), lat_jerk(n), lon_acc(n), lat_acc(n);
  for (std::size_t k = 0; k < n; ++k) {
    lon_acc[k] = std::abs(traj.points[k].as);
    lat_acc[k] = std::abs(traj.points[k].ad);
  }
  if (poly) {
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * dt;
      lon_jerk[k] = std::abs(poly_eval_d3(poly->lon, t));
      lat_jerk[k] = std::abs(poly_eval_d3(poly->lat, t));
    }
  } else {
    auto fd_jerk = [&](auto accessor, std::size_t k) {
      if (k == 0) return (accessor(1) - accessor(0)) / dt;
      if (k + 1 == n) return (accessor(n - 1) - accessor(n - 2)) / dt;
      return (accessor(k + 1) - accessor(k - 1)) / (2.0 * dt);
    };
    auto as_at = [&](std::size_t k) { return traj.points[k].as; };
    auto ad_at = [&](std::size_t k) { return traj.points[k].ad; };
    for (std::size_t k = 0; k < n; ++k) {
      lon_jerk[k] = std::abs(fd_jerk(as_at, k));
      lat_jerk[k] = std::abs(fd_jerk(ad_at, k));
    }
  }

  ComfortCosts out;
  out.lon_jerk = trapezoid(lon_jerk, dt) / tau;
  out.lat_jerk = trapezoid(lat_jerk, dt) / tau;
  out.lon_acc = trapezoid(lon_acc, dt) / tau;
  out.lat_acc = trapezoid(lat_acc, dt) / tau;
  return out;
}

double efficiency_cost(const Trajectory& traj, const DrivingSituation& situation) {
  const double tau = traj.duration();
  if (!(tau > 0.0)) throw std::invalid_argument("efficiency_cost: zero-duration trajectory");
  const double mean_speed = (traj.points.back().s - traj.points.front().s) / tau;
  return situation.ego.vs - mean_speed;
}

double safety_cost(const Trajectory& traj, const DrivingSituation& situation,
                   const CostConfig& cfg) {
  const std::size_t n = traj.points.size();
  if (n < 2) return 0.0;
  const double dt = traj.dt;
  const double tau = traj.duration();

  double total = 0.0;
  std::vector<double> integrand(n);
  for (SlotId id : kAllSlots) {
    const auto& st = situation.slot(id);
    if (!st) continue;
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * dt;
      const double ds = traj.points[k].s - (st->s + st->vs * t);
      const double dd = traj.points[k].d - st->d;
      integrand[k] = std::exp(-(cfg.lambda_s * ds * ds + dd * dd));
    }
    total += trapezoid(integrand, dt) / tau;
  }
  return total;
}

HeuristicCosts heuristic_incentive_costs(const Trajectory& traj,
                                         const DrivingSituation& situation,
                                         const CostConfig& cfg) {
  const auto [front_id, back_id] = lane_slots(traj.target_lane);
  const double ego_v = situation.ego.vs;

  // Virtual vehicles recede from the ego: faster in front, slower behind.
  const auto& front = situation.slot(front_id);
  const auto& back = situation.slot(back_id);
  const double front_v = front ? front->vs : ego_v + cfg.virtual_speed;
  const double back_v = back ? back->vs : ego_v - cfg.virtual_speed;

  const double end_v = traj.points.back().vs;

  HeuristicCosts out;
  out.start_front = -(front_v - ego_v);
  out.start_back = back_v - ego_v;
  out.end_front = -(front_v - end_v);
  out.end_back = back_v - end_v;
  return out;
}

std::array<double, kNumBaseCosts> compute_base_costs(const Candidate& candidate,
                                                     const DrivingSituation& situation,
                                                     const CostConfig& cfg) {
  std::array<double, kNumBaseCosts> bases{};
  const ComfortCosts comfort = comfort_costs(candidate.traj, &candidate.poly);
  bases[kLonJerk] = comfort.lon_jerk;
  bases[kLatJerk] = comfort.lat_jerk;
  bases[kLonAcc] = comfort.lon_acc;
  bases[kLatAcc] = comfort.lat_acc;
  bases[kEfficiency] = efficiency_cost(candidate.traj, situation);
  bases[kSafety] = safety_cost(candidate.traj, situation, cfg);
  const HeuristicCosts heu = heuristic_incentive_costs(candidate.traj, situation, cfg);
  bases[kHeuStartFront] = heu.start_front;
  bases[kHeuStartBack] = heu.start_back;
  bases[kHeuEndFront] = heu.end_front;
  bases[kHeuEndBack] = heu.end_back;
  return bases;
}

CostVector assemble_cost_vector(const std::array<double, kNumBaseCosts>& bases,
                                const CostConfig& cfg, CostVariant variant,
                                std::optional<double> rf_cost) {
  const bool wants_rf = variant == CostVariant::F2 || variant == CostVariant::F3;
  if (wants_rf && !rf_cost)
    throw std::invalid_argument("assemble_cost_vector: rf cost required for f2/f3");
  if (!wants_rf && rf_cost)
    throw std::invalid_argument("assemble_cost_vector: rf cost only valid for f2/f3");

  std::array<double, kNumBaseCosts> scaled{};
  for (std::size_t i = 0; i < kNumBaseCosts; ++i) scaled[i] = bases[i] / cfg.normalizers[i];

  CostVector cv;
  cv.variant = variant;
  cv.values.reserve(cost_vector_length(variant, cfg.K));

  // Powers applied to the signed normalized value, grouped by power k.
  auto append_powers = [&](std::size_t first, std::size_t count) {
    std::array<double, kNumBaseCosts> pow_acc = scaled;
    for (int k = 1; k <= cfg.K; ++k) {
      for (std::size_t i = first; i < first + count; ++i) cv.values.push_back(pow_acc[i]);
      if (k < cfg.K) {
        for (std::size_t i = first; i < first + count; ++i) pow_acc[i] *= scaled[i];
      }
    }
  };
  append_powers(0, kNumTradCosts);
  if (variant == CostVariant::F1) append_powers(kHeuStartFront, kNumHeuCosts);
  if (wants_rf) cv.values.push_back(*rf_cost);
  return cv;
}

double total_cost(const CostVector& cv, const WeightVector& w) {
  if (cv.variant != w.variant)
    throw std::invalid_argument("total_cost: variant mismatch");
  if (cv.values.size() != w.weights.size())
    throw std::invalid_argument("total_cost: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < cv.values.size(); ++i) sum += cv.values[i] * w.weights[i];
  return sum;
}

}  // namespace hlplan
