#include "hlplan/trajgen.hpp"

#include <algorithm>
#include <cmath>

namespace hlplan {

namespace {

constexpr double kGridEps = 1e-9;

void require_finite(std::initializer_list<double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite input");
  }
}

}  // namespace

double poly_eval(const PolyCoeffs& c, double t) {
  // Horner form.
  return ((((c[5] * t + c[4]) * t + c[3]) * t + c[2]) * t + c[1]) * t + c[0];
}

double poly_eval_d1(const PolyCoeffs& c, double t) {
  return (((5.0 * c[5] * t + 4.0 * c[4]) * t + 3.0 * c[3]) * t + 2.0 * c[2]) * t + c[1];
}

double poly_eval_d2(const PolyCoeffs& c, double t) {
  return ((20.0 * c[5] * t + 12.0 * c[4]) * t + 6.0 * c[3]) * t + 2.0 * c[2];
}

double poly_eval_d3(const PolyCoeffs& c, double t) {
  return (60.0 * c[5] * t + 24.0 * c[4]) * t + 6.0 * c[3];
}

PolyCoeffs fit_lateral(double d0, double dd0, double ddd0, double d_end, double tau) {
  require_finite({d0, dd0, ddd0, d_end, tau}, "fit_lateral");
  if (!(tau > 0.0)) throw std::invalid_argument("fit_lateral: tau must be positive");

  const double T = tau;
  PolyCoeffs c{};
  c[0] = d0;
  c[1] = dd0;
  c[2] = 0.5 * ddd0;

  // Residual boundary conditions after fixing a0..a2.
  const double r0 = d_end - (c[0] + c[1] * T + c[2] * T * T);
  const double r1 = -(c[1] + 2.0 * c[2] * T);
  const double r2 = -2.0 * c[2];

  const double T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;
  c[3] = (20.0 * r0 - 8.0 * r1 * T + r2 * T2) / (2.0 * T3);
  c[4] = (-30.0 * r0 + 14.0 * r1 * T - 2.0 * r2 * T2) / (2.0 * T4);
  c[5] = (12.0 * r0 - 6.0 * r1 * T + r2 * T2) / (2.0 * T5);
  return c;
}

PolyCoeffs fit_longitudinal(double s0, double v0, double a0, double v_end, double tau) {
  require_finite({s0, v0, a0, v_end, tau}, "fit_longitudinal");
  if (!(tau > 0.0)) throw std::invalid_argument("fit_longitudinal: tau must be positive");

  const double T = tau;
  PolyCoeffs c{};
  c[0] = s0;
  c[1] = v0;
  c[2] = 0.5 * a0;
  c[5] = 0.0;

  const double r0 = v_end - (c[1] + 2.0 * c[2] * T);  // velocity residual at tau
  const double r1 = -2.0 * c[2];                      // acceleration residual at tau
  c[3] = (3.0 * r0 - T * r1) / (3.0 * T * T);
  c[4] = (T * r1 - 2.0 * r0) / (4.0 * T * T * T);
  return c;
}

std::vector<TerminalTarget> tessellate(const DrivingSituation& situation,
                                       const TessellationConfig& cfg,
                                       const PlanningMode& mode) {
  std::vector<Lane> lanes;
  switch (mode.kind) {
    case PlanningMode::Kind::TargetLaneGiven:
      lanes = {mode.lane};
      break;
    case PlanningMode::Kind::LaneChangeOnly:
      lanes = {Lane::Right, Lane::Left};
      break;
    case PlanningMode::Kind::ThreeWay:
      lanes = {Lane::Right, Lane::Current, Lane::Left};
      break;
  }
  std::erase_if(lanes, [&](Lane l) { return !situation.lane_exists(l); });

  auto lane_offset = [&](Lane l) {
    if (l == Lane::Left) return cfg.d_lane;
    if (l == Lane::Right) return -cfg.d_lane;
    return 0.0;
  };
  // Lanes ascending by terminal lateral offset.
  std::sort(lanes.begin(), lanes.end(),
            [&](Lane a, Lane b) { return lane_offset(a) < lane_offset(b); });

  const double v_lo = std::max(situation.ego.vs - cfg.delta_v, 0.0);
  const double v_hi = std::min(situation.ego.vs + cfg.delta_v, cfg.v_max);

  std::vector<TerminalTarget> targets;
  for (Lane lane : lanes) {
    const double d_end = lane_offset(lane);
    for (double tau = cfg.tau_min; tau <= cfg.tau_max + kGridEps; tau += cfg.tau_res) {
      for (double v = v_lo; v <= v_hi + kGridEps; v += cfg.v_res) {
        targets.push_back({d_end, v, tau, lane});
      }
    }
  }
  if (targets.empty()) {
    throw DataError("tessellate: empty terminal-state grid for the requested mode");
  }
  return targets;
}

Trajectory discretize(const PolynomialPair& poly, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("discretize: dt must be positive");
  if (dt > poly.tau) throw std::invalid_argument("discretize: dt exceeds trajectory duration");

  const auto n = static_cast<std::size_t>(std::floor(poly.tau / dt + kGridEps));
  Trajectory traj;
  traj.dt = dt;
  traj.points.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    FrenetState p;
    p.s = poly_eval(poly.lon, t);
    p.vs = poly_eval_d1(poly.lon, t);
    p.as = poly_eval_d2(poly.lon, t);
    p.d = poly_eval(poly.lat, t);
    p.vd = poly_eval_d1(poly.lat, t);
    p.ad = poly_eval_d2(poly.lat, t);
    traj.points.push_back(p);
  }
  return traj;
}

std::vector<Candidate> generate_candidates(const DrivingSituation& situation,
                                           const TessellationConfig& cfg,
                                           const PlanningMode& mode, double dt) {
  const auto targets = tessellate(situation, cfg, mode);
  const FrenetState& ego = situation.ego;

  std::vector<Candidate> candidates;
  candidates.reserve(targets.size());
  for (const TerminalTarget& tg : targets) {
    Candidate c;
    // Initial lateral velocity and acceleration are assumed zero regardless
    // of the recorded ego state; the lateral position is taken from the ego.
    c.poly.lat = fit_lateral(ego.d, 0.0, 0.0, tg.d_end, tg.tau);
    c.poly.lon = fit_longitudinal(ego.s, ego.vs, ego.as, tg.v_end, tg.tau);
    c.poly.tau = tg.tau;
    c.traj = discretize(c.poly, dt);
    c.traj.target_lane = tg.lane;
    candidates.push_back(std::move(c));
  }
  return candidates;
}

}  // namespace hlplan
