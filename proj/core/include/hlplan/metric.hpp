#pragma once

#include "hlplan/types.hpp"

namespace hlplan {

struct MetricConfig {
  double lambda_d = 1.0;  // weight of the velocity error (s)
  double dt = 0.1;        // synchronization interval (s)
};

/// Resamples position and velocity onto a uniform dt grid by linear
/// interpolation; a trajectory already on the grid is returned unchanged.
Trajectory resample(const Trajectory& traj, double dt);

/// Average pointwise position + weighted velocity error over the synchronized
/// prefix, excluding the shared initial point:
/// d = (1/n_min) * sum_{n=1..n_min} (|p1-p2| + lambda_d * |v1-v2|).
double trajectory_distance(const Trajectory& t1, const Trajectory& t2,
                           const MetricConfig& cfg);

}  // namespace hlplan
