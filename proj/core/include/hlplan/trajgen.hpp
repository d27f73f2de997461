#pragma once

#include <array>
#include <vector>

#include "hlplan/types.hpp"

namespace hlplan {

using PolyCoeffs = std::array<double, 6>;

double poly_eval(const PolyCoeffs& c, double t);
double poly_eval_d1(const PolyCoeffs& c, double t);
double poly_eval_d2(const PolyCoeffs& c, double t);
double poly_eval_d3(const PolyCoeffs& c, double t);

/// One candidate motion: a quintic lateral polynomial and a longitudinal
/// polynomial with the quintic coefficient pinned to zero (velocity keeping),
/// both over [0, tau].
struct PolynomialPair {
  PolyCoeffs lat{};
  PolyCoeffs lon{};
  double tau = 0.0;
};

struct TessellationConfig {
  double d_lane = kDefaultLaneWidth;  // lane width (m)
  double delta_v = 4.0;               // half-width of the terminal speed window (m/s)
  double v_res = 1.0;                 // speed grid step (m/s)
  double tau_min = 6.0;               // duration bounds (s)
  double tau_max = 10.0;
  double tau_res = 1.0;               // duration grid step (s)
  double v_max = 22.2;                // speed limit (m/s), 80 km/h
};

struct PlanningMode {
  enum class Kind { TargetLaneGiven, LaneChangeOnly, ThreeWay };
  Kind kind = Kind::ThreeWay;
  Lane lane = Lane::Current;  // only for TargetLaneGiven

  static PlanningMode target_lane(Lane lane) {
    return {Kind::TargetLaneGiven, lane};
  }
  static PlanningMode lane_change_only() { return {Kind::LaneChangeOnly, Lane::Current}; }
  static PlanningMode three_way() { return {Kind::ThreeWay, Lane::Current}; }
};

struct TerminalTarget {
  double d_end = 0.0;
  double v_end = 0.0;
  double tau = 0.0;
  Lane lane = Lane::Current;
};

/// Quintic boundary-value fit on the lateral axis:
/// d(0)=d0, d'(0)=dd0, d''(0)=ddd0, d(tau)=d_end, d'(tau)=0, d''(tau)=0.
PolyCoeffs fit_lateral(double d0, double dd0, double ddd0, double d_end, double tau);

/// Longitudinal fit with five constraints and b5 pinned to zero:
/// s(0)=s0, s'(0)=v0, s''(0)=a0, s'(tau)=v_end, s''(tau)=0.
PolyCoeffs fit_longitudinal(double s0, double v0, double a0, double v_end, double tau);

/// Terminal-state grid: lateral targets on lane centers filtered by mode and
/// lane existence, a speed window of +-delta_v clipped to [0, v_max] and
/// anchored at the lower bound, and the duration range. Returned in
/// (d_end, tau, v_end) lexicographic order.
std::vector<TerminalTarget> tessellate(const DrivingSituation& situation,
                                       const TessellationConfig& cfg,
                                       const PlanningMode& mode);

/// Sampled trajectory plus its generating polynomials (kept for analytic jerk).
struct Candidate {
  PolynomialPair poly;
  Trajectory traj;
};

/// Samples both polynomials at t = 0, dt, ..., floor(tau/dt)*dt.
Trajectory discretize(const PolynomialPair& poly, double dt);

/// One candidate per tessellated target, in tessellation order.
std::vector<Candidate> generate_candidates(const DrivingSituation& situation,
                                           const TessellationConfig& cfg,
                                           const PlanningMode& mode, double dt);

}  // namespace hlplan
