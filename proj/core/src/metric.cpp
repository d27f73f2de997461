#include "hlplan/metric.hpp"

#include <cmath>

namespace hlplan {

Trajectory resample(const Trajectory& traj, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("resample: dt must be positive");
  if (traj.points.size() < 2)
    throw std::invalid_argument("resample: need at least 2 points");
  if (std::abs(traj.dt - dt) < 1e-12) return traj;

  const double duration = traj.duration();
  const auto n = static_cast<std::size_t>(std::floor(duration / dt + 1e-9));
  Trajectory out;
  out.dt = dt;
  out.target_lane = traj.target_lane;
  out.points.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double pos = t / traj.dt;
    auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= traj.points.size()) i = traj.points.size() - 2;
    const double a = pos - static_cast<double>(i);
    const FrenetState& p0 = traj.points[i];
    const FrenetState& p1 = traj.points[i + 1];
    FrenetState p;
    p.s = p0.s + a * (p1.s - p0.s);
    p.d = p0.d + a * (p1.d - p0.d);
    p.vs = p0.vs + a * (p1.vs - p0.vs);
    p.vd = p0.vd + a * (p1.vd - p0.vd);
    p.as = p0.as + a * (p1.as - p0.as);
    p.ad = p0.ad + a * (p1.ad - p0.ad);
    out.points.push_back(p);
  }
  return out;
}

double trajectory_distance(const Trajectory& t1, const Trajectory& t2,
                           const MetricConfig& cfg) {
  const Trajectory a = resample(t1, cfg.dt);
  const Trajectory b = resample(t2, cfg.dt);
  if (a.points.size() < 2 || b.points.size() < 2)
    throw std::invalid_argument("trajectory_distance: need at least 2 points");

  // Number of intervals on the shorter trajectory; index 0 is excluded.
  const std::size_t n_min = std::min(a.points.size(), b.points.size()) - 1;
  double sum = 0.0;
  for (std::size_t n = 1; n <= n_min; ++n) {
    const FrenetState& p = a.points[n];
    const FrenetState& q = b.points[n];
    sum += std::hypot(p.s - q.s, p.d - q.d) +
           cfg.lambda_d * std::hypot(p.vs - q.vs, p.vd - q.vd);
  }
  return sum / static_cast<double>(n_min);
}

}  // namespace hlplan
