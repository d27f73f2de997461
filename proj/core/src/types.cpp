#include "hlplan/types.hpp"

#include <cmath>

namespace hlplan {

const char* slot_name(SlotId id) {
  switch (id) {
    case SlotId::CF: return "cf";
    case SlotId::CB: return "cb";
    case SlotId::LF: return "lf";
    case SlotId::LB: return "lb";
    case SlotId::RF: return "rf";
    case SlotId::RB: return "rb";
  }
  return "?";
}

const char* lane_name(Lane lane) {
  switch (lane) {
    case Lane::Left: return "left";
    case Lane::Current: return "current";
    case Lane::Right: return "right";
  }
  return "?";
}

const char* maneuver_name(Maneuver m) {
  switch (m) {
    case Maneuver::LLC: return "LLC";
    case Maneuver::RLC: return "RLC";
    case Maneuver::CF: return "CF";
  }
  return "?";
}

Maneuver lane_to_maneuver(Lane lane) {
  switch (lane) {
    case Lane::Left: return Maneuver::LLC;
    case Lane::Right: return Maneuver::RLC;
    case Lane::Current: return Maneuver::CF;
  }
  return Maneuver::CF;
}

Lane maneuver_to_lane(Maneuver m) {
  switch (m) {
    case Maneuver::LLC: return Lane::Left;
    case Maneuver::RLC: return Lane::Right;
    case Maneuver::CF: return Lane::Current;
  }
  return Lane::Current;
}

bool all_finite(const FrenetState& st) {
  return std::isfinite(st.s) && std::isfinite(st.d) && std::isfinite(st.vs) &&
         std::isfinite(st.vd) && std::isfinite(st.as) && std::isfinite(st.ad);
}

std::vector<std::string> validate_sample(const HumanDrivingSample& sample,
                                         double lane_width) {
  std::vector<std::string> violations;
  const DrivingSituation& sit = sample.situation;

  if (!all_finite(sit.ego)) violations.push_back("ego state contains non-finite values");
  if (std::abs(sit.ego.s) > 1e-9)
    violations.push_back("ego longitudinal position is not at the frame origin");
  if (sit.ego.vs < kMinEgoSpeed) violations.push_back("ego speed below 8 m/s");

  if (sit.road < -1 || sit.road > 1) violations.push_back("road flag outside {-1,0,1}");
  for (SlotId id : kAllSlots) {
    const auto& st = sit.slot(id);
    if (st && !all_finite(*st)) {
      violations.push_back(std::string(slot_name(id)) + " state contains non-finite values");
    }
  }
  if (sit.road == -1 && (sit.slot(SlotId::LF) || sit.slot(SlotId::LB)))
    violations.push_back("left lane marked absent but lf occupied");
  if (sit.road == 1 && (sit.slot(SlotId::RF) || sit.slot(SlotId::RB)))
    violations.push_back("right lane marked absent but rf occupied");

  if (sample.gt.points.empty()) {
    violations.push_back("ground-truth trajectory is empty");
    return violations;
  }
  if (!(sample.gt.dt > 0.0)) violations.push_back("ground-truth dt must be positive");
  for (const FrenetState& p : sample.gt.points) {
    if (!all_finite(p)) {
      violations.push_back("ground-truth trajectory contains non-finite values");
      break;
    }
  }

  const FrenetState& p0 = sample.gt.points.front();
  auto mismatch = [](double a, double b) { return std::abs(a - b) > 1e-6; };
  if (mismatch(p0.s, sit.ego.s) || mismatch(p0.d, sit.ego.d) ||
      mismatch(p0.vs, sit.ego.vs) || mismatch(p0.vd, sit.ego.vd) ||
      mismatch(p0.as, sit.ego.as) || mismatch(p0.ad, sit.ego.ad)) {
    violations.push_back("first ground-truth point does not match the ego state");
  }

  double expected_offset = 0.0;
  if (sample.label == Maneuver::LLC) expected_offset = lane_width;
  if (sample.label == Maneuver::RLC) expected_offset = -lane_width;
  if (std::abs(sample.gt.points.back().d - expected_offset) >= 0.5) {
    violations.push_back(std::string("label ") + maneuver_name(sample.label) +
                         " inconsistent with terminal lateral position");
  }

  return violations;
}

}  // namespace hlplan
