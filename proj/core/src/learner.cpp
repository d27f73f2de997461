#include "hlplan/learner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace hlplan {

namespace {

void check_compat(const SampleCache& cache, const WeightVector& w) {
  if (w.variant != cache.variant)
    throw std::invalid_argument("weight variant does not match the cache");
  const std::size_t expected = cost_vector_length(cache.variant, cache.K);
  if (w.weights.size() != expected)
    throw std::invalid_argument("weight vector length does not match the cache");
}

std::vector<double> sample_probabilities(const std::vector<CachedCandidate>& cands,
                                         const WeightVector& w) {
  std::vector<double> costs(cands.size());
  for (std::size_t j = 0; j < cands.size(); ++j) costs[j] = total_cost(cands[j].costs, w);
  return selection_probabilities(costs);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> selection_probabilities(const std::vector<double>& costs) {
  if (costs.empty())
    throw std::invalid_argument("selection_probabilities: empty cost list");
  double min_cost = costs.front();
  for (double c : costs) {
    if (!std::isfinite(c)) throw NumericalError("selection_probabilities: non-finite cost");
    min_cost = std::min(min_cost, c);
  }
  std::vector<double> probs(costs.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < costs.size(); ++j) {
    probs[j] = std::exp(-(costs[j] - min_cost));
    sum += probs[j];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

double loss(const SampleCache& cache, const WeightVector& w) {
  check_compat(cache, w);
  double total = 0.0;
  for (const auto& cands : cache.samples) {
    const auto probs = sample_probabilities(cands, w);
    for (std::size_t j = 0; j < cands.size(); ++j) total += probs[j] * cands[j].distance;
  }
  return total;
}

std::vector<double> gradient(const SampleCache& cache, const WeightVector& w) {
  check_compat(cache, w);
  std::vector<double> grad(w.weights.size(), 0.0);
  for (const auto& cands : cache.samples) {
    const auto probs = sample_probabilities(cands, w);
    // Expected distance, computed once per sample and shared across j.
    double expected = 0.0;
    for (std::size_t k = 0; k < cands.size(); ++k) expected += probs[k] * cands[k].distance;
    for (std::size_t j = 0; j < cands.size(); ++j) {
      const double scale = probs[j] * (expected - cands[j].distance);
      const auto& values = cands[j].costs.values;
      for (std::size_t t = 0; t < values.size(); ++t) grad[t] += scale * values[t];
    }
  }
  return grad;
}

SampleCache build_cache(const std::vector<HumanDrivingSample>& samples,
                        const PlanningMode& mode, CostVariant variant,
                        const TessellationConfig& tess_cfg, const CostConfig& cost_cfg,
                        const MetricConfig& metric_cfg, double dt,
                        const ForestModel* forest) {
  const bool wants_rf = variant == CostVariant::F2 || variant == CostVariant::F3;
  if (wants_rf && forest == nullptr)
    throw std::invalid_argument("build_cache: forest required for f2/f3");

  struct RawSample {
    std::vector<std::array<double, kNumBaseCosts>> bases;
    std::vector<double> distances;
    std::vector<Lane> lanes;
    const DrivingSituation* situation;
  };

  // Pass 1: bases and distances, which are normalizer-independent.
  std::vector<RawSample> raw;
  raw.reserve(samples.size());
  for (const auto& sample : samples) {
    PlanningMode sample_mode = mode;
    if (mode.kind == PlanningMode::Kind::TargetLaneGiven) {
      sample_mode.lane = maneuver_to_lane(sample.label);
    }
    std::vector<Candidate> cands;
    try {
      cands = generate_candidates(sample.situation, tess_cfg, sample_mode, dt);
    } catch (const std::exception& e) {
      throw DataError("candidate generation failed for sample '" + sample.id +
                      "': " + e.what());
    }
    RawSample rs;
    rs.situation = &sample.situation;
    rs.bases.reserve(cands.size());
    rs.distances.reserve(cands.size());
    for (const Candidate& c : cands) {
      rs.bases.push_back(compute_base_costs(c, sample.situation, cost_cfg));
      rs.distances.push_back(trajectory_distance(c.traj, sample.gt, metric_cfg));
      rs.lanes.push_back(c.traj.target_lane);
    }
    raw.push_back(std::move(rs));
  }

  // Corpus normalizers: mean absolute value of each base term, floored.
  std::array<double, kNumBaseCosts> sums{};
  std::size_t count = 0;
  for (const auto& rs : raw) {
    for (const auto& b : rs.bases) {
      for (std::size_t t = 0; t < kNumBaseCosts; ++t) sums[t] += std::abs(b[t]);
      ++count;
    }
  }
  SampleCache cache;
  cache.variant = variant;
  cache.K = cost_cfg.K;
  for (std::size_t t = 0; t < kNumBaseCosts; ++t) {
    cache.normalizers[t] =
        count == 0 ? 1.0 : std::max(sums[t] / static_cast<double>(count), 1e-8);
  }

  CostConfig assemble_cfg = cost_cfg;
  assemble_cfg.normalizers = cache.normalizers;

  // Pass 2: assemble the cost vectors.
  cache.samples.reserve(raw.size());
  for (const auto& rs : raw) {
    std::vector<CachedCandidate> cands;
    cands.reserve(rs.bases.size());
    for (std::size_t j = 0; j < rs.bases.size(); ++j) {
      std::optional<double> rf;
      if (wants_rf) {
        rf = rf_incentive_cost(*forest, *rs.situation, lane_to_maneuver(rs.lanes[j]),
                               assemble_cfg);
      }
      cands.push_back({assemble_cost_vector(rs.bases[j], assemble_cfg, variant, rf),
                       rs.distances[j]});
    }
    cache.samples.push_back(std::move(cands));
  }
  return cache;
}

FitResult fit(const SampleCache& cache, const FitConfig& cfg) {
  if (cache.samples.empty()) throw std::invalid_argument("fit: empty cache");
  const std::size_t dim = cost_vector_length(cache.variant, cache.K);

  WeightVector w;
  w.variant = cache.variant;
  if (cfg.warm_start) {
    if (cfg.warm_start->size() != dim)
      throw std::invalid_argument("fit: warm start length mismatch");
    w.weights = *cfg.warm_start;
  } else {
    w.weights.assign(dim, 0.0);
  }

  auto evaluate = [&](const std::vector<double>& x, std::vector<double>& g) {
    WeightVector wx{cache.variant, x};
    const double f = loss(cache, wx);
    g = gradient(cache, wx);
    if (!std::isfinite(f)) throw NumericalError("fit: non-finite loss");
    for (double gi : g) {
      if (!std::isfinite(gi)) throw NumericalError("fit: non-finite gradient");
    }
    return f;
  };

  int total_iters = 0;
  auto minimize = [&](std::vector<double> x) {
    std::vector<double> g;
    double f = evaluate(x, g);

    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;

    int iter = 0;
    while (iter < cfg.max_iterations && inf_norm(g) > cfg.gradient_tolerance) {
    // Two-loop recursion for the search direction.
    std::vector<double> q = g;
    std::vector<double> alphas(s_hist.size());
    for (std::size_t h = s_hist.size(); h-- > 0;) {
      alphas[h] = rho_hist[h] * dot(s_hist[h], q);
      for (std::size_t t = 0; t < dim; ++t) q[t] -= alphas[h] * y_hist[h][t];
    }
    if (!s_hist.empty()) {
      const double gamma =
          dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (double& qt : q) qt *= gamma;
    }
    for (std::size_t h = 0; h < s_hist.size(); ++h) {
      const double beta = rho_hist[h] * dot(y_hist[h], q);
      for (std::size_t t = 0; t < dim; ++t) q[t] += (alphas[h] - beta) * s_hist[h][t];
    }
    std::vector<double> dir(dim);
    for (std::size_t t = 0; t < dim; ++t) dir[t] = -q[t];

    double slope = dot(g, dir);
    if (slope >= 0.0) {  // not a descent direction, fall back to steepest descent
      for (std::size_t t = 0; t < dim; ++t) dir[t] = -g[t];
      slope = dot(g, dir);
    }

    // Armijo backtracking. Cap the first trial step so no single move grows
    // the iterate by more than a fraction of its current magnitude: large
    // raw steps land deep in the saturated region of the softmax where the
    // gradient carries no ranking information.
    constexpr double c1 = 1e-4;
    const double cap = std::max(1.0, 0.1 * inf_norm(x));
    double step = std::min(1.0, cap / std::max(inf_norm(dir), 1e-300));
    std::vector<double> x_new(dim), g_new;
    double f_new = f;
    bool accepted = false;
    while (step > 1e-20) {
      for (std::size_t t = 0; t < dim; ++t) x_new[t] = x[t] + step * dir[t];
      f_new = evaluate(x_new, g_new);
      if (f_new <= f + c1 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no further decrease possible at this scale

    std::vector<double> s(dim), y(dim);
    for (std::size_t t = 0; t < dim; ++t) {
      s[t] = x_new[t] - x[t];
      y[t] = g_new[t] - g[t];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > cfg.history_size) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
    ++iter;
    }
    total_iters += iter;
    return std::pair{std::move(x), f};
  };

  auto [x, f] = minimize(w.weights);

  // Restart rounds: shrinking the converged weights to a moderate norm
  // de-saturates the softmax so another pass can correct the ranking. A
  // round is kept only when the loss strictly improves, so warm starts
  // still dominate.
  for (int round = 0; round < cfg.restart_rounds; ++round) {
    const double norm = inf_norm(x);
    if (norm <= 0.0) break;
    std::vector<double> scaled = x;
    for (double& v : scaled) v *= cfg.restart_norm / norm;
    auto [x_r, f_r] = minimize(std::move(scaled));
    if (f_r >= f) break;
    x = std::move(x_r);
    f = f_r;
  }

  w.weights = std::move(x);
  return {std::move(w), f, total_iters};
}

}  // namespace hlplan
