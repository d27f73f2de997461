#include "hlplan/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hlplan {

using nlohmann::json;

namespace {

json state_to_json(const FrenetState& st) {
  return json{{"s", st.s},  {"d", st.d},  {"vs", st.vs},
              {"vd", st.vd}, {"as", st.as}, {"ad", st.ad}};
}

FrenetState state_from_json(const json& j) {
  FrenetState st;
  st.s = j.at("s").get<double>();
  st.d = j.at("d").get<double>();
  st.vs = j.at("vs").get<double>();
  st.vd = j.at("vd").get<double>();
  st.as = j.at("as").get<double>();
  st.ad = j.at("ad").get<double>();
  return st;
}

Maneuver maneuver_from_name(const std::string& name) {
  if (name == "LLC") return Maneuver::LLC;
  if (name == "RLC") return Maneuver::RLC;
  if (name == "CF") return Maneuver::CF;
  throw DataError("unknown maneuver label: " + name);
}

json tess_to_json(const TessellationConfig& cfg) {
  return json{{"d_lane", cfg.d_lane},   {"delta_v", cfg.delta_v},
              {"v_res", cfg.v_res},     {"tau_min", cfg.tau_min},
              {"tau_max", cfg.tau_max}, {"tau_res", cfg.tau_res},
              {"v_max", cfg.v_max}};
}

TessellationConfig tess_from_json(const json& j) {
  TessellationConfig cfg;
  cfg.d_lane = j.at("d_lane").get<double>();
  cfg.delta_v = j.at("delta_v").get<double>();
  cfg.v_res = j.at("v_res").get<double>();
  cfg.tau_min = j.at("tau_min").get<double>();
  cfg.tau_max = j.at("tau_max").get<double>();
  cfg.tau_res = j.at("tau_res").get<double>();
  cfg.v_max = j.at("v_max").get<double>();
  return cfg;
}

}  // namespace

json situation_to_json(const DrivingSituation& situation) {
  json env = json::object();
  for (SlotId id : kAllSlots) {
    const auto& st = situation.slot(id);
    env[slot_name(id)] = st ? state_to_json(*st) : json(nullptr);
  }
  return json{{"road", situation.road}, {"ego", state_to_json(situation.ego)},
              {"env", env}};
}

DrivingSituation situation_from_json(const json& j) {
  DrivingSituation sit;
  sit.road = j.at("road").get<int>();
  sit.ego = state_from_json(j.at("ego"));
  const json& env = j.at("env");
  for (SlotId id : kAllSlots) {
    const json& slot = env.at(slot_name(id));
    if (!slot.is_null()) sit.slot(id) = state_from_json(slot);
  }
  return sit;
}

json sample_to_json(const HumanDrivingSample& sample) {
  json j = situation_to_json(sample.situation);
  j["id"] = sample.id;
  j["label"] = maneuver_name(sample.label);
  json points = json::array();
  for (const FrenetState& p : sample.gt.points) {
    points.push_back(json::array({p.s, p.d, p.vs, p.vd, p.as, p.ad}));
  }
  j["gt"] = json{{"dt", sample.gt.dt}, {"points", points}};
  return j;
}

HumanDrivingSample sample_from_json(const json& j) {
  HumanDrivingSample sample;
  sample.id = j.at("id").get<std::string>();
  sample.situation = situation_from_json(j);
  sample.label = maneuver_from_name(j.at("label").get<std::string>());
  const json& gt = j.at("gt");
  sample.gt.dt = gt.at("dt").get<double>();
  for (const json& p : gt.at("points")) {
    if (!p.is_array() || p.size() != 6) throw DataError("trajectory point must have 6 entries");
    FrenetState st;
    st.s = p[0].get<double>();
    st.d = p[1].get<double>();
    st.vs = p[2].get<double>();
    st.vd = p[3].get<double>();
    st.as = p[4].get<double>();
    st.ad = p[5].get<double>();
    sample.gt.points.push_back(st);
  }
  sample.gt.target_lane = maneuver_to_lane(sample.label);
  return sample;
}

json forest_to_json(const ForestModel& model) {
  json trees = json::array();
  for (const auto& tree : model.trees) {
    json nodes = json::array();
    for (const TreeNode& n : tree) {
      nodes.push_back(json{{"feature", n.feature},
                           {"threshold", n.threshold},
                           {"left", n.left},
                           {"right", n.right},
                           {"counts", n.counts}});
    }
    trees.push_back(std::move(nodes));
  }
  return json{{"pool", model.pool == DecisionPool::TwoWay ? 2 : 3},
              {"seed", model.seed},
              {"n_trees", model.n_trees},
              {"min_samples_leaf", model.min_samples_leaf},
              {"alpha", model.alpha},
              {"trees", trees}};
}

ForestModel forest_from_json(const json& j) {
  ForestModel model;
  model.pool = j.at("pool").get<int>() == 2 ? DecisionPool::TwoWay : DecisionPool::ThreeWay;
  model.seed = j.at("seed").get<std::uint64_t>();
  model.n_trees = j.at("n_trees").get<int>();
  model.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  model.alpha = j.at("alpha").get<double>();
  for (const json& tree : j.at("trees")) {
    std::vector<TreeNode> nodes;
    for (const json& n : tree) {
      TreeNode node;
      node.feature = n.at("feature").get<int>();
      node.threshold = n.at("threshold").get<double>();
      node.left = n.at("left").get<int>();
      node.right = n.at("right").get<int>();
      node.counts = n.at("counts").get<std::array<std::int64_t, 3>>();
      nodes.push_back(node);
    }
    model.trees.push_back(std::move(nodes));
  }
  return model;
}

json model_to_json(const PlannerModel& model) {
  json j{{"format_version", 1},
         {"variant", variant_name(model.variant)},
         {"k", model.cost_cfg.K},
         {"weights", model.weights.weights},
         {"normalizers", model.cost_cfg.normalizers},
         {"cost_cfg",
          json{{"lambda_s", model.cost_cfg.lambda_s},
               {"virtual_distance", model.cost_cfg.virtual_distance},
               {"virtual_speed", model.cost_cfg.virtual_speed}}},
         {"tess_cfg", tess_to_json(model.tess_cfg)},
         {"metric_cfg",
          json{{"lambda_d", model.metric_cfg.lambda_d}, {"dt", model.metric_cfg.dt}}},
         {"dt", model.dt},
         // Sign convention of the lateral axis, relied on by LLC/RLC deduction.
         {"lateral_convention", "positive d points toward the left lane"}};
  if (model.forest) j["forest"] = forest_to_json(*model.forest);
  return j;
}

PlannerModel model_from_json(const json& j) {
  if (j.at("format_version").get<int>() != 1)
    throw DataError("unsupported model format version");
  PlannerModel model;
  model.variant = variant_from_name(j.at("variant").get<std::string>());
  model.cost_cfg.K = j.at("k").get<int>();
  model.weights.variant = model.variant;
  model.weights.weights = j.at("weights").get<std::vector<double>>();
  model.cost_cfg.normalizers = j.at("normalizers").get<std::array<double, kNumBaseCosts>>();
  const json& cc = j.at("cost_cfg");
  model.cost_cfg.lambda_s = cc.at("lambda_s").get<double>();
  model.cost_cfg.virtual_distance = cc.at("virtual_distance").get<double>();
  model.cost_cfg.virtual_speed = cc.at("virtual_speed").get<double>();
  model.tess_cfg = tess_from_json(j.at("tess_cfg"));
  const json& mc = j.at("metric_cfg");
  model.metric_cfg.lambda_d = mc.at("lambda_d").get<double>();
  model.metric_cfg.dt = mc.at("dt").get<double>();
  model.dt = j.at("dt").get<double>();
  if (j.contains("forest") && !j.at("forest").is_null()) {
    model.forest = forest_from_json(j.at("forest"));
  }
  const std::size_t expected = cost_vector_length(model.variant, model.cost_cfg.K);
  if (model.weights.weights.size() != expected)
    throw DataError("model weight vector length inconsistent with variant and k");
  return model;
}

LoadResult load_samples(const std::string& path, double lane_width) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open sample file: " + path);

  LoadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": malformed JSON: " + e.what());
    }
    HumanDrivingSample sample;
    try {
      sample = sample_from_json(j);
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": schema violation: " + e.what());
    }
    const auto violations = validate_sample(sample, lane_width);
    if (!violations.empty()) {
      std::ostringstream why;
      why << line_no << ": sample '" << sample.id << "' rejected:";
      for (const auto& v : violations) why << " " << v << ";";
      result.rejected.push_back(why.str());
      continue;
    }
    result.samples.push_back(std::move(sample));
  }
  return result;
}

void save_samples(const std::string& path,
                  const std::vector<HumanDrivingSample>& samples) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write sample file: " + path);
  for (const auto& sample : samples) out << sample_to_json(sample).dump() << "\n";
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path + ": malformed JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

void save_model(const std::string& path, const PlannerModel& model) {
  write_json_file(path, model_to_json(model));
}

PlannerModel load_model(const std::string& path) {
  return model_from_json(read_json_file(path));
}

}  // namespace hlplan
