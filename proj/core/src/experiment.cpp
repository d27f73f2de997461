#include "hlplan/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

namespace hlplan {

using nlohmann::json;

namespace {

int class_index(Maneuver m, Experiment exp) {
  if (exp == Experiment::Exp3) {
    // Paper table order: CF, LLC, RLC.
    switch (m) {
      case Maneuver::CF: return 0;
      case Maneuver::LLC: return 1;
      case Maneuver::RLC: return 2;
    }
  }
  return m == Maneuver::LLC ? 0 : 1;  // LLC, RLC for the lane-change experiments
}

std::vector<std::string> class_names(Experiment exp) {
  if (exp == Experiment::Exp3) return {"CF", "LLC", "RLC"};
  return {"LLC", "RLC"};
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

ConfusionMatrix make_confusion(const std::vector<std::string>& classes,
                               const std::vector<std::pair<int, int>>& gt_pred) {
  const std::size_t n = classes.size();
  ConfusionMatrix cm;
  cm.classes = classes;
  cm.counts.assign(n, std::vector<long>(n, 0));
  for (auto [gt, pred] : gt_pred) {
    cm.counts[static_cast<std::size_t>(gt)][static_cast<std::size_t>(pred)]++;
    cm.total++;
  }
  long diag = 0;
  cm.precision.assign(n, 0.0);
  cm.recall.assign(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    long row = 0, col = 0;
    for (std::size_t k = 0; k < n; ++k) {
      row += cm.counts[c][k];
      col += cm.counts[k][c];
    }
    diag += cm.counts[c][c];
    cm.recall[c] = row > 0 ? static_cast<double>(cm.counts[c][c]) / static_cast<double>(row) : 0.0;
    cm.precision[c] =
        col > 0 ? static_cast<double>(cm.counts[c][c]) / static_cast<double>(col) : 0.0;
  }
  cm.overall_accuracy =
      cm.total > 0 ? static_cast<double>(diag) / static_cast<double>(cm.total) : 0.0;
  return cm;
}

std::vector<long> histogram(const std::vector<double>& values, double bin_width) {
  std::vector<long> bins;
  for (double v : values) {
    const auto b = static_cast<std::size_t>(std::max(0.0, std::floor(v / bin_width)));
    if (b >= bins.size()) bins.resize(b + 1, 0);
    bins[b]++;
  }
  return bins;
}

json confusion_to_json(const ConfusionMatrix& cm) {
  return json{{"classes", cm.classes},   {"matrix", cm.counts},
              {"precision", cm.precision}, {"recall", cm.recall},
              {"overall_accuracy", cm.overall_accuracy}, {"total", cm.total}};
}

json report_to_json(const EvalReport& report) {
  json per_sample = json::array();
  for (std::size_t i = 0; i < report.sample_ids.size(); ++i) {
    per_sample.push_back(json{{"id", report.sample_ids[i]},
                              {"min_dist", report.min_dist[i]},
                              {"min_cost", report.min_cost[i]},
                              {"label", maneuver_name(report.labels[i])},
                              {"decision", maneuver_name(report.decisions[i])}});
  }
  return json{{"mean_min_dist", report.mean_min_dist},
              {"mean_min_cost", report.mean_min_cost},
              {"mean_all_dist", report.mean_all_dist},
              {"histogram_bin_width", 0.25},
              {"hist_all_dist", report.hist_all_dist},
              {"hist_min_dist", report.hist_min_dist},
              {"hist_min_cost", report.hist_min_cost},
              {"confusion", confusion_to_json(report.confusion)},
              {"per_sample", per_sample}};
}

std::pair<std::vector<HumanDrivingSample>, std::vector<HumanDrivingSample>> split(
    const std::vector<HumanDrivingSample>& samples, const std::array<int, 3>& train_counts,
    const std::array<int, 3>& test_counts, std::uint64_t seed) {
  std::array<std::vector<std::size_t>, 3> by_class;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    by_class[static_cast<std::size_t>(samples[i].label)].push_back(i);
  }

  std::mt19937_64 rng(seed);
  std::pair<std::vector<HumanDrivingSample>, std::vector<HumanDrivingSample>> out;
  for (std::size_t c = 0; c < 3; ++c) {
    auto& pool = by_class[c];
    const auto want = static_cast<std::size_t>(train_counts[c] + test_counts[c]);
    if (pool.size() < want) {
      throw DataError(std::string("split: not enough ") +
                      maneuver_name(static_cast<Maneuver>(c)) + " samples");
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int i = 0; i < train_counts[c]; ++i)
      out.first.push_back(samples[pool[static_cast<std::size_t>(i)]]);
    for (int i = 0; i < test_counts[c]; ++i)
      out.second.push_back(samples[pool[static_cast<std::size_t>(train_counts[c] + i)]]);
  }
  return out;
}

PlanningMode experiment_mode(Experiment exp) {
  switch (exp) {
    case Experiment::Exp1: return PlanningMode::target_lane(Lane::Current);  // resolved per sample
    case Experiment::Exp2: return PlanningMode::lane_change_only();
    case Experiment::Exp3: return PlanningMode::three_way();
  }
  return PlanningMode::three_way();
}

bool variant_legal(Experiment exp, CostVariant variant) {
  switch (exp) {
    case Experiment::Exp1: return variant == CostVariant::F0;
    case Experiment::Exp2: return variant == CostVariant::F0 || variant == CostVariant::F1;
    case Experiment::Exp3: return true;
  }
  return false;
}

EvalReport evaluate_model(const PlannerModel& model,
                          const std::vector<HumanDrivingSample>& samples, Experiment exp) {
  EvalReport report;
  std::vector<std::pair<int, int>> gt_pred;
  for (const auto& sample : samples) {
    PlanningMode mode = experiment_mode(exp);
    if (mode.kind == PlanningMode::Kind::TargetLaneGiven)
      mode.lane = maneuver_to_lane(sample.label);

    const ScoredCandidates scored = score_candidates(sample.situation, model, mode);
    double min_dist = std::numeric_limits<double>::infinity();
    for (const Candidate& c : scored.candidates) {
      const double d = trajectory_distance(c.traj, sample.gt, model.metric_cfg);
      report.all_dist.push_back(d);
      min_dist = std::min(min_dist, d);
    }
    const double min_cost = trajectory_distance(scored.candidates[scored.argmin].traj,
                                                sample.gt, model.metric_cfg);
    const Maneuver decision =
        deduce_decision(scored.candidates[scored.argmin].traj, model.tess_cfg.d_lane);

    report.sample_ids.push_back(sample.id);
    report.min_dist.push_back(min_dist);
    report.min_cost.push_back(min_cost);
    report.labels.push_back(sample.label);
    report.decisions.push_back(decision);
    gt_pred.emplace_back(class_index(sample.label, exp), class_index(decision, exp));
  }
  report.mean_min_dist = mean(report.min_dist);
  report.mean_min_cost = mean(report.min_cost);
  report.mean_all_dist = mean(report.all_dist);
  report.hist_all_dist = histogram(report.all_dist);
  report.hist_min_dist = histogram(report.min_dist);
  report.hist_min_cost = histogram(report.min_cost);
  report.confusion = make_confusion(class_names(exp), gt_pred);
  return report;
}

ForestModel train_decision_forest(const std::vector<HumanDrivingSample>& train,
                                  DecisionPool pool, const ExperimentConfig& cfg,
                                  std::uint64_t seed) {
  std::vector<std::pair<SituationDescriptor, int>> data;
  data.reserve(train.size());
  for (const auto& sample : train) {
    data.emplace_back(encode_situation(sample.situation, cfg.cost),
                      maneuver_to_class(sample.label, pool));
  }
  return train_forest(data, pool, cfg.forest_hyper, seed);
}

ExperimentResult run_experiment(Experiment exp, CostVariant variant,
                                const std::vector<HumanDrivingSample>& train,
                                const std::vector<HumanDrivingSample>& test,
                                const ExperimentConfig& cfg, std::uint64_t seed) {
  if (!variant_legal(exp, variant)) {
    throw std::invalid_argument(std::string("variant ") + variant_name(variant) +
                                " is not defined for experiment " +
                                std::to_string(static_cast<int>(exp)));
  }

  ExperimentResult result;
  const ForestModel* forest_ptr = nullptr;
  if (variant == CostVariant::F2 || variant == CostVariant::F3) {
    const DecisionPool pool =
        variant == CostVariant::F2 ? DecisionPool::TwoWay : DecisionPool::ThreeWay;
    result.model.forest = train_decision_forest(train, pool, cfg, seed);
    forest_ptr = &*result.model.forest;
  }

  const PlanningMode mode = experiment_mode(exp);
  const SampleCache cache = build_cache(train, mode, variant, cfg.tess, cfg.cost,
                                        cfg.metric, cfg.dt, forest_ptr);
  result.fit = fit(cache, cfg.fit);

  result.model.variant = variant;
  result.model.weights = result.fit.weights;
  result.model.cost_cfg = cfg.cost;
  result.model.cost_cfg.normalizers = cache.normalizers;
  result.model.tess_cfg = cfg.tess;
  result.model.metric_cfg = cfg.metric;
  result.model.dt = cfg.dt;

  result.train_report = evaluate_model(result.model, train, exp);
  result.test_report = evaluate_model(result.model, test, exp);
  return result;
}

ConfusionMatrix evaluate_forest(const ForestModel& model,
                                const std::vector<HumanDrivingSample>& test,
                                const CostConfig& cost_cfg) {
  if (test.empty()) throw DataError("evaluate_forest: empty test set");
  std::vector<std::string> classes;
  for (std::size_t c = 0; c < model.n_classes(); ++c)
    classes.push_back(class_name(static_cast<int>(c), model.pool));

  std::vector<std::pair<int, int>> gt_pred;
  for (const auto& sample : test) {
    const auto desc = encode_situation(sample.situation, cost_cfg);
    gt_pred.emplace_back(maneuver_to_class(sample.label, model.pool),
                         predict_class(model, desc));
  }
  return make_confusion(classes, gt_pred);
}

std::vector<SweepRow> sweep_k(const std::vector<HumanDrivingSample>& train,
                              const std::vector<int>& k_values,
                              const ExperimentConfig& cfg) {
  if (!std::is_sorted(k_values.begin(), k_values.end()))
    throw std::invalid_argument("sweep_k: k values must be ascending");

  std::vector<SweepRow> rows;
  std::vector<double> prev_weights;
  for (int K : k_values) {
    ExperimentConfig kcfg = cfg;
    kcfg.cost.K = K;
    const SampleCache cache = build_cache(train, PlanningMode::three_way(), CostVariant::F0,
                                          kcfg.tess, kcfg.cost, kcfg.metric, kcfg.dt);
    FitConfig fit_cfg = kcfg.fit;
    if (!prev_weights.empty()) {
      // The f0 layout is grouped by power, so the previous optimum is a prefix.
      std::vector<double> warm(cost_vector_length(CostVariant::F0, K), 0.0);
      std::copy(prev_weights.begin(), prev_weights.end(), warm.begin());
      fit_cfg.warm_start = std::move(warm);
    }
    const FitResult fr = fit(cache, fit_cfg);

    PlannerModel model;
    model.variant = CostVariant::F0;
    model.weights = fr.weights;
    model.cost_cfg = kcfg.cost;
    model.cost_cfg.normalizers = cache.normalizers;
    model.tess_cfg = kcfg.tess;
    model.metric_cfg = kcfg.metric;
    model.dt = kcfg.dt;
    const EvalReport train_report = evaluate_model(model, train, Experiment::Exp3);

    rows.push_back({K, fr.loss, train_report.confusion.overall_accuracy});
    prev_weights = fr.weights.weights;
  }
  return rows;
}

UnbalancedStudyResult unbalanced_study(const SynthConfig& synth_cfg,
                                       const ExperimentConfig& cfg,
                                       const std::array<int, 3>& train_counts,
                                       const std::array<int, 3>& test_counts,
                                       double cf_multiplier, std::uint64_t seed) {
  if (!(cf_multiplier >= 1.0))
    throw std::invalid_argument("unbalanced_study: cf_multiplier must be >= 1");

  auto scale_cf = [&](const std::array<int, 3>& counts) {
    std::array<int, 3> scaled = counts;
    scaled[static_cast<std::size_t>(Maneuver::CF)] = static_cast<int>(
        std::lround(cf_multiplier * counts[static_cast<std::size_t>(Maneuver::CF)]));
    return scaled;
  };
  const std::array<int, 3> train_scaled = scale_cf(train_counts);
  const std::array<int, 3> test_scaled = scale_cf(test_counts);

  SynthConfig gen_cfg = synth_cfg;
  for (std::size_t c = 0; c < 3; ++c) gen_cfg.label_mix[c] = train_scaled[c] + test_scaled[c];
  const auto samples = synthesize_dataset(gen_cfg);
  auto [train, test] = split(samples, train_scaled, test_scaled, seed);

  const ExperimentResult res =
      run_experiment(Experiment::Exp3, CostVariant::F0, train, test, cfg, seed);
  return {res.train_report, res.test_report};
}

}  // namespace hlplan
