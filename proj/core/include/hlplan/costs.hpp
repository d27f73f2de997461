#pragma once

#include <array>
#include <optional>
#include <vector>

#include "hlplan/trajgen.hpp"
#include "hlplan/types.hpp"

namespace hlplan {

enum class CostVariant { F0 = 0, F1 = 1, F2 = 2, F3 = 3 };

const char* variant_name(CostVariant v);
CostVariant variant_from_name(const std::string& name);

/// Indices of the base cost terms, in the order they enter the cost vector.
enum BaseCost : std::size_t {
  kLonJerk = 0,
  kLatJerk = 1,
  kLonAcc = 2,
  kLatAcc = 3,
  kEfficiency = 4,
  kSafety = 5,
  kHeuStartFront = 6,
  kHeuStartBack = 7,
  kHeuEndFront = 8,
  kHeuEndBack = 9,
};
inline constexpr std::size_t kNumBaseCosts = 10;
inline constexpr std::size_t kNumTradCosts = 6;
inline constexpr std::size_t kNumHeuCosts = 4;

struct CostConfig {
  double lambda_s = 0.1;            // longitudinal vs lateral gap weighting in the safety term
  int K = 5;                        // maximum power of each base cost term
  double virtual_distance = 200.0;  // |s_rel| substituted for absent vehicles (m)
  double virtual_speed = 20.0;      // |s_rel'| substituted for absent vehicles (m/s)
  // Positive per-base-term scales applied before power expansion; computed on
  // the training corpus and frozen with the model.
  std::array<double, kNumBaseCosts> normalizers = {1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
};

struct CostVector {
  CostVariant variant = CostVariant::F0;
  std::vector<double> values;
};

struct WeightVector {
  CostVariant variant = CostVariant::F0;
  std::vector<double> weights;
};

/// Vector length for a variant: F0 = 6K, F1 = 10K, F2/F3 = 6K + 1.
std::size_t cost_vector_length(CostVariant variant, int K);

/// Constant-velocity prediction of one environment vehicle, sampled on the
/// trajectory time grid. Lateral position is held constant.
struct EnvTrack {
  SlotId slot;
  double s0 = 0.0;
  double d0 = 0.0;
  double speed = 0.0;
  std::vector<std::array<double, 2>> points;  // (s, d) at t = 0, dt, ...
};

std::vector<EnvTrack> predict_env(const DrivingSituation& situation, double tau,
                                  double dt);

struct ComfortCosts {
  double lon_jerk = 0.0;
  double lat_jerk = 0.0;
  double lon_acc = 0.0;
  double lat_acc = 0.0;
};

/// Time-averaged absolute jerk and acceleration on both axes. Jerk comes from
/// the generating polynomials when supplied, otherwise from finite differences
/// of the sampled accelerations.
ComfortCosts comfort_costs(const Trajectory& traj,
                           const PolynomialPair* poly = nullptr);

/// Speed loss against the ego's initial speed: ego.vs - (s(tau) - s(0))/tau.
double efficiency_cost(const Trajectory& traj, const DrivingSituation& situation);

/// Sum over present vehicles of the time-averaged exponential proximity
/// penalty exp(-(lambda_s*Ds^2 + Dd^2)) against their predicted motion.
double safety_cost(const Trajectory& traj, const DrivingSituation& situation,
                   const CostConfig& cfg);

struct HeuristicCosts {
  double start_front = 0.0;
  double start_back = 0.0;
  double end_front = 0.0;
  double end_back = 0.0;
};

/// Relative-speed lane incentive terms for the trajectory's target lane,
/// evaluated at the start and the predicted end of the maneuver. Absent
/// vehicles are replaced by virtual ones receding at cfg.virtual_speed.
HeuristicCosts heuristic_incentive_costs(const Trajectory& traj,
                                         const DrivingSituation& situation,
                                         const CostConfig& cfg);

/// All ten base terms of one candidate (heuristic entries included regardless
/// of variant; unused ones are simply not assembled).
std::array<double, kNumBaseCosts> compute_base_costs(const Candidate& candidate,
                                                     const DrivingSituation& situation,
                                                     const CostConfig& cfg);

/// Normalizes the base terms, expands powers k = 1..K grouped by power
/// (all traditional blocks first, then heuristic blocks for F1), and appends
/// the raw forest cost for F2/F3.
CostVector assemble_cost_vector(const std::array<double, kNumBaseCosts>& bases,
                                const CostConfig& cfg, CostVariant variant,
                                std::optional<double> rf_cost = std::nullopt);

/// Inner product of a cost vector with a matching weight vector.
double total_cost(const CostVector& cv, const WeightVector& w);

}  // namespace hlplan
