// Command-line front end for the hlplan library: dataset synthesis, splitting,
// weight training, evaluation, planning and the study harnesses.

#include <array>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hlplan/experiment.hpp"
#include "hlplan/io.hpp"
#include "hlplan/synth.hpp"

namespace {

using nlohmann::json;
using namespace hlplan;

// "cf,llc,rlc" -> counts in the library's {LLC, RLC, CF} order.
std::array<int, 3> parse_class_counts(const std::string& text) {
  std::array<int, 3> cf_llc_rlc{};
  std::stringstream ss(text);
  std::string tok;
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(ss, tok, ',')) throw CLI::ValidationError("--counts", "expected cf,llc,rlc");
    cf_llc_rlc[static_cast<std::size_t>(i)] = std::stoi(tok);
  }
  return {cf_llc_rlc[1], cf_llc_rlc[2], cf_llc_rlc[0]};
}

std::pair<std::array<int, 3>, std::array<int, 3>> parse_split_counts(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos)
    throw CLI::ValidationError("--counts", "expected cf,llc,rlc/cf,llc,rlc");
  return {parse_class_counts(text.substr(0, slash)), parse_class_counts(text.substr(slash + 1))};
}

TessellationConfig tess_from_json(const json& j) {
  TessellationConfig c;
  c.d_lane = j.value("d_lane", c.d_lane);
  c.delta_v = j.value("delta_v", c.delta_v);
  c.v_res = j.value("v_res", c.v_res);
  c.tau_min = j.value("tau_min", c.tau_min);
  c.tau_max = j.value("tau_max", c.tau_max);
  c.tau_res = j.value("tau_res", c.tau_res);
  c.v_max = j.value("v_max", c.v_max);
  return c;
}

SynthConfig synth_config_from_json(const json& j) {
  SynthConfig c;
  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    if (o.contains("weights")) {
      auto w = o.at("weights").get<std::vector<double>>();
      if (w.size() != kNumBaseCosts)
        throw DataError("oracle.weights must have " + std::to_string(kNumBaseCosts) + " entries");
      std::copy(w.begin(), w.end(), c.oracle.weights.begin());
    }
    c.oracle.lane_rule = o.value("lane_rule", c.oracle.lane_rule);
    c.oracle.rule_penalty = o.value("rule_penalty", c.oracle.rule_penalty);
    c.oracle.rule_noise_std = o.value("rule_noise_std", c.oracle.rule_noise_std);
    c.oracle.rule_gain_threshold =
        o.value("rule_gain_threshold", c.oracle.rule_gain_threshold);
    c.oracle.rule_gap_threshold =
        o.value("rule_gap_threshold", c.oracle.rule_gap_threshold);
  }
  c.ego_speed_min = j.value("ego_speed_min", c.ego_speed_min);
  c.ego_speed_max = j.value("ego_speed_max", c.ego_speed_max);
  c.front_presence_prob = j.value("front_presence_prob", c.front_presence_prob);
  c.back_presence_prob = j.value("back_presence_prob", c.back_presence_prob);
  c.front_gap_min = j.value("front_gap_min", c.front_gap_min);
  c.front_gap_max = j.value("front_gap_max", c.front_gap_max);
  c.back_gap_min = j.value("back_gap_min", c.back_gap_min);
  c.back_gap_max = j.value("back_gap_max", c.back_gap_max);
  c.rel_speed_min = j.value("rel_speed_min", c.rel_speed_min);
  c.rel_speed_max = j.value("rel_speed_max", c.rel_speed_max);
  c.lateral_jitter = j.value("lateral_jitter", c.lateral_jitter);
  if (j.contains("road_probs")) {
    auto p = j.at("road_probs").get<std::vector<double>>();
    if (p.size() != 3) throw DataError("road_probs must have 3 entries");
    std::copy(p.begin(), p.end(), c.road_probs.begin());
  }
  if (j.contains("label_mix")) {
    // File order is {llc, rlc, cf}, matching the library.
    auto m = j.at("label_mix").get<std::vector<int>>();
    if (m.size() != 3) throw DataError("label_mix must have 3 entries");
    std::copy(m.begin(), m.end(), c.label_mix.begin());
  }
  c.noise_std = j.value("noise_std", c.noise_std);
  c.seed = j.value("seed", c.seed);
  c.max_attempts_per_sample = j.value("max_attempts_per_sample", c.max_attempts_per_sample);
  if (j.contains("tess")) c.tess = tess_from_json(j.at("tess"));
  c.dt = j.value("dt", c.dt);
  return c;
}

json plan_result_to_json(const PlanResult& result, double dt) {
  json traj_points = json::array();
  for (const FrenetState& p : result.trajectory.points)
    traj_points.push_back({p.s, p.d, p.vs, p.vd, p.as, p.ad});
  return json{{"decision", maneuver_name(result.decision)},
              {"selected_index", result.selected_index},
              {"costs", result.costs},
              {"probabilities", result.probabilities},
              {"trajectory", {{"dt", dt}, {"points", traj_points}}}};
}

Experiment experiment_from_int(int exp) {
  if (exp < 1 || exp > 3) throw CLI::ValidationError("--exp", "must be 1, 2 or 3");
  return static_cast<Experiment>(exp);
}

struct CommonTrainOpts {
  std::string train_path;
  std::string test_path;
  std::string report_path;
  std::uint64_t seed = 0;
  int k = 5;
};

int run(int argc, char** argv) {
  CLI::App app{"Learning cost-function weights for a sampling-based highway planner"};
  app.require_subcommand(1);

  // --- synth ---
  auto* synth = app.add_subcommand("synth", "Generate a synthetic sample file");
  std::string synth_config_path, synth_out;
  std::optional<std::uint64_t> synth_seed;
  synth->add_option("--config", synth_config_path, "SynthConfig JSON (optional; defaults used otherwise)");
  synth->add_option("--out", synth_out, "Output JSONL path")->required();
  synth->add_option("--seed", synth_seed, "Seed override");

  // --- split ---
  auto* split_cmd = app.add_subcommand("split", "Stratified train/test split");
  std::string split_in, split_train, split_test, split_counts = "90,90,90/53,45,45";
  std::uint64_t split_seed = 0;
  split_cmd->add_option("--in", split_in, "Input JSONL")->required();
  split_cmd->add_option("--train", split_train, "Train output JSONL")->required();
  split_cmd->add_option("--test", split_test, "Test output JSONL")->required();
  split_cmd->add_option("--counts", split_counts, "cf,llc,rlc/cf,llc,rlc per-class counts");
  split_cmd->add_option("--seed", split_seed, "Seed");

  // --- train ---
  auto* train_cmd = app.add_subcommand("train", "Fit cost weights on a train split");
  int train_exp = 3;
  std::string train_variant = "f0", train_model_out;
  CommonTrainOpts topt;
  train_cmd->add_option("--exp", train_exp, "Experiment premise: 1, 2 or 3")->required();
  train_cmd->add_option("--variant", train_variant, "Cost variant f0|f1|f2|f3")->required();
  train_cmd->add_option("--k", topt.k, "Max power K (default 5)");
  train_cmd->add_option("--train", topt.train_path, "Train JSONL")->required();
  train_cmd->add_option("--model-out", train_model_out, "Model JSON output")->required();
  train_cmd->add_option("--test", topt.test_path, "Optional test JSONL (adds a test report)");
  train_cmd->add_option("--report", topt.report_path, "Optional JSON report output");
  train_cmd->add_option("--seed", topt.seed, "Seed (forest training)");

  // --- eval ---
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a trained model");
  std::string eval_model, eval_test, eval_report;
  int eval_exp = 3;
  eval_cmd->add_option("--model", eval_model, "Model JSON")->required();
  eval_cmd->add_option("--test", eval_test, "Test JSONL")->required();
  eval_cmd->add_option("--report", eval_report, "Report JSON output")->required();
  eval_cmd->add_option("--exp", eval_exp, "Experiment premise (default 3)");

  // --- plan ---
  auto* plan_cmd = app.add_subcommand("plan", "Plan for one situation, print the result as JSON");
  std::string plan_model, plan_situation, plan_mode = "three-way";
  plan_cmd->add_option("--model", plan_model, "Model JSON")->required();
  plan_cmd->add_option("--situation", plan_situation, "DrivingSituation JSON")->required();
  plan_cmd->add_option("--mode", plan_mode,
                       "three-way | lane-change-only | left | right | current");

  // --- sweep-k ---
  auto* sweep_cmd = app.add_subcommand("sweep-k", "Warm-started f0 fits over ascending K");
  std::string sweep_train, sweep_ks = "1,2,3,4,5", sweep_out;
  sweep_cmd->add_option("--train", sweep_train, "Train JSONL")->required();
  sweep_cmd->add_option("--k", sweep_ks, "Comma-separated ascending K values");
  sweep_cmd->add_option("--out", sweep_out, "Optional JSON output (otherwise stdout)");

  // --- forest-train ---
  auto* forest_cmd = app.add_subcommand("forest-train", "Train a lane-decision forest");
  int forest_ways = 3;
  std::string forest_train_path, forest_model_out, forest_test, forest_report;
  std::uint64_t forest_seed = 0;
  forest_cmd->add_option("--ways", forest_ways, "2 (LC/CF) or 3 (LLC/CF/RLC)")->required();
  forest_cmd->add_option("--train", forest_train_path, "Train JSONL")->required();
  forest_cmd->add_option("--model-out", forest_model_out, "Forest JSON output")->required();
  forest_cmd->add_option("--test", forest_test, "Optional test JSONL");
  forest_cmd->add_option("--report", forest_report, "Optional confusion report JSON");
  forest_cmd->add_option("--seed", forest_seed, "Seed");

  // --- unbalanced ---
  auto* unb_cmd = app.add_subcommand("unbalanced", "Re-run the three-way f0 study with CF oversampled");
  std::string unb_config, unb_report, unb_counts = "90,90,90/53,45,45";
  double unb_mult = 3.0;
  std::uint64_t unb_seed = 0;
  unb_cmd->add_option("--config", unb_config, "SynthConfig JSON (optional)");
  unb_cmd->add_option("--counts", unb_counts, "cf,llc,rlc/cf,llc,rlc base counts");
  unb_cmd->add_option("--cf-mult", unb_mult, "CF count multiplier (> 1)");
  unb_cmd->add_option("--report", unb_report, "Report JSON output")->required();
  unb_cmd->add_option("--seed", unb_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (synth->parsed()) {
    SynthConfig cfg;
    if (!synth_config_path.empty()) cfg = synth_config_from_json(read_json_file(synth_config_path));
    if (synth_seed) cfg.seed = *synth_seed;
    save_samples(synth_out, synthesize_dataset(cfg));
    std::cout << "wrote " << synth_out << "\n";
  } else if (split_cmd->parsed()) {
    auto [train_counts, test_counts] = parse_split_counts(split_counts);
    LoadResult loaded = load_samples(split_in);
    for (const std::string& r : loaded.rejected) std::cerr << split_in << ":" << r << "\n";
    auto [train, test] = split(loaded.samples, train_counts, test_counts, split_seed);
    save_samples(split_train, train);
    save_samples(split_test, test);
    std::cout << "train " << train.size() << ", test " << test.size() << "\n";
  } else if (train_cmd->parsed()) {
    Experiment exp = experiment_from_int(train_exp);
    CostVariant variant = variant_from_name(train_variant);
    ExperimentConfig cfg;
    cfg.cost.K = topt.k;
    LoadResult train_loaded = load_samples(topt.train_path);
    for (const std::string& r : train_loaded.rejected)
      std::cerr << topt.train_path << ":" << r << "\n";
    std::vector<HumanDrivingSample> test;
    if (!topt.test_path.empty()) {
      LoadResult test_loaded = load_samples(topt.test_path);
      for (const std::string& r : test_loaded.rejected)
        std::cerr << topt.test_path << ":" << r << "\n";
      test = std::move(test_loaded.samples);
    }
    ExperimentResult result =
        run_experiment(exp, variant, train_loaded.samples, test, cfg, topt.seed);
    save_model(train_model_out, result.model);
    if (!topt.report_path.empty()) {
      json report{{"experiment", train_exp},
                  {"variant", variant_name(variant)},
                  {"k", topt.k},
                  {"loss", result.fit.loss},
                  {"iterations", result.fit.iterations},
                  {"train", report_to_json(result.train_report)}};
      if (!test.empty()) report["test"] = report_to_json(result.test_report);
      write_json_file(topt.report_path, report);
    }
    std::cout << "loss " << result.fit.loss << " after " << result.fit.iterations
              << " iterations\n";
  } else if (eval_cmd->parsed()) {
    PlannerModel model = load_model(eval_model);
    LoadResult loaded = load_samples(eval_test);
    for (const std::string& r : loaded.rejected) std::cerr << eval_test << ":" << r << "\n";
    EvalReport report = evaluate_model(model, loaded.samples, experiment_from_int(eval_exp));
    write_json_file(eval_report, report_to_json(report));
    std::cout << "overall accuracy " << report.confusion.overall_accuracy << "\n";
  } else if (plan_cmd->parsed()) {
    PlannerModel model = load_model(plan_model);
    DrivingSituation situation = situation_from_json(read_json_file(plan_situation));
    PlanningMode mode = PlanningMode::three_way();
    if (plan_mode == "lane-change-only") mode = PlanningMode::lane_change_only();
    else if (plan_mode == "left") mode = PlanningMode::target_lane(Lane::Left);
    else if (plan_mode == "right") mode = PlanningMode::target_lane(Lane::Right);
    else if (plan_mode == "current") mode = PlanningMode::target_lane(Lane::Current);
    else if (plan_mode != "three-way")
      throw CLI::ValidationError("--mode", "unknown mode " + plan_mode);
    PlanResult result = plan(situation, model, mode);
    std::cout << plan_result_to_json(result, model.dt).dump(2) << "\n";
  } else if (sweep_cmd->parsed()) {
    std::vector<int> ks;
    std::stringstream ss(sweep_ks);
    std::string tok;
    while (std::getline(ss, tok, ',')) ks.push_back(std::stoi(tok));
    LoadResult loaded = load_samples(sweep_train);
    for (const std::string& r : loaded.rejected) std::cerr << sweep_train << ":" << r << "\n";
    ExperimentConfig cfg;
    std::vector<SweepRow> rows = sweep_k(loaded.samples, ks, cfg);
    json out = json::array();
    for (const SweepRow& row : rows)
      out.push_back({{"k", row.K}, {"loss", row.loss}, {"train_decision_oa", row.train_decision_oa}});
    if (sweep_out.empty()) std::cout << out.dump(2) << "\n";
    else write_json_file(sweep_out, out);
  } else if (forest_cmd->parsed()) {
    if (forest_ways != 2 && forest_ways != 3)
      throw CLI::ValidationError("--ways", "must be 2 or 3");
    DecisionPool pool = forest_ways == 2 ? DecisionPool::TwoWay : DecisionPool::ThreeWay;
    LoadResult loaded = load_samples(forest_train_path);
    for (const std::string& r : loaded.rejected)
      std::cerr << forest_train_path << ":" << r << "\n";
    ExperimentConfig cfg;
    ForestModel model = train_decision_forest(loaded.samples, pool, cfg, forest_seed);
    write_json_file(forest_model_out, forest_to_json(model));
    if (!forest_test.empty()) {
      LoadResult test_loaded = load_samples(forest_test);
      for (const std::string& r : test_loaded.rejected)
        std::cerr << forest_test << ":" << r << "\n";
      ConfusionMatrix cm = evaluate_forest(model, test_loaded.samples, cfg.cost);
      if (!forest_report.empty()) write_json_file(forest_report, confusion_to_json(cm));
      std::cout << "overall accuracy " << cm.overall_accuracy << "\n";
    } else {
      std::cout << "wrote " << forest_model_out << "\n";
    }
  } else if (unb_cmd->parsed()) {
    SynthConfig synth_cfg;
    if (!unb_config.empty()) synth_cfg = synth_config_from_json(read_json_file(unb_config));
    auto [train_counts, test_counts] = parse_split_counts(unb_counts);
    ExperimentConfig cfg;
    UnbalancedStudyResult result =
        unbalanced_study(synth_cfg, cfg, train_counts, test_counts, unb_mult, unb_seed);
    write_json_file(unb_report, json{{"train", report_to_json(result.train_report)},
                                     {"test", report_to_json(result.test_report)}});
    std::cout << "test overall accuracy " << result.test_report.confusion.overall_accuracy
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const hlplan::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const hlplan::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
