#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlplan {

/// Malformed or inconsistent input data (bad files, schema violations, ...).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite values or failed numerical procedures.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Lane { Right = 0, Current = 1, Left = 2 };

enum class Maneuver { LLC = 0, RLC = 1, CF = 2 };

/// Relevant scene vehicle slots: front/back on the current, left and right lanes.
enum class SlotId { CF = 0, CB = 1, LF = 2, LB = 3, RF = 4, RB = 5 };

inline constexpr std::size_t kNumSlots = 6;
inline constexpr std::array<SlotId, kNumSlots> kAllSlots = {
    SlotId::CF, SlotId::CB, SlotId::LF, SlotId::LB, SlotId::RF, SlotId::RB};

inline bool is_front_slot(SlotId id) {
  return id == SlotId::CF || id == SlotId::LF || id == SlotId::RF;
}

const char* slot_name(SlotId id);
const char* lane_name(Lane lane);
const char* maneuver_name(Maneuver m);
Maneuver lane_to_maneuver(Lane lane);
Lane maneuver_to_lane(Maneuver m);

/// A kinematic state in the road-aligned frame: longitudinal arc length s,
/// lateral offset d from the current lane center (positive toward the left lane),
/// plus first and second derivatives on both axes.
struct FrenetState {
  double s = 0.0;
  double d = 0.0;
  double vs = 0.0;
  double vd = 0.0;
  double as = 0.0;
  double ad = 0.0;
};

bool all_finite(const FrenetState& st);

/// Ego state, up to six surrounding vehicles and the road-position flag.
/// road: -1 = ego is on the farthest left lane (no left lane),
///        0 = a middle lane, 1 = farthest right lane (no right lane).
struct DrivingSituation {
  FrenetState ego;
  std::array<std::optional<FrenetState>, kNumSlots> env;
  int road = 0;

  const std::optional<FrenetState>& slot(SlotId id) const {
    return env[static_cast<std::size_t>(id)];
  }
  std::optional<FrenetState>& slot(SlotId id) {
    return env[static_cast<std::size_t>(id)];
  }
  bool lane_exists(Lane lane) const {
    if (lane == Lane::Left) return road != -1;
    if (lane == Lane::Right) return road != 1;
    return true;
  }
};

/// Time-discretized trajectory; the point at index k is at time k*dt.
struct Trajectory {
  double dt = 0.1;
  std::vector<FrenetState> points;
  Lane target_lane = Lane::Current;

  double duration() const {
    return points.empty() ? 0.0 : static_cast<double>(points.size() - 1) * dt;
  }
};

struct HumanDrivingSample {
  std::string id;
  DrivingSituation situation;
  Trajectory gt;
  Maneuver label = Maneuver::CF;
};

/// Minimum ego speed accepted for a sample; slower segments belong to jammed
/// traffic and are discarded upstream.
inline constexpr double kMinEgoSpeed = 8.0;

/// Default lane width in meters.
inline constexpr double kDefaultLaneWidth = 3.5;

/// Checks every sample invariant and returns a description of each violation.
/// An empty result means the sample is well formed. Pure and deterministic.
std::vector<std::string> validate_sample(const HumanDrivingSample& sample,
                                         double lane_width = kDefaultLaneWidth);

}  // namespace hlplan
