#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hlplan/planner.hpp"
#include "hlplan/types.hpp"

namespace hlplan {

nlohmann::json situation_to_json(const DrivingSituation& situation);
DrivingSituation situation_from_json(const nlohmann::json& j);

nlohmann::json sample_to_json(const HumanDrivingSample& sample);
HumanDrivingSample sample_from_json(const nlohmann::json& j);

nlohmann::json forest_to_json(const ForestModel& model);
ForestModel forest_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const PlannerModel& model);
PlannerModel model_from_json(const nlohmann::json& j);

struct LoadResult {
  std::vector<HumanDrivingSample> samples;
  // One entry per rejected line: "<line>: <reason>".
  std::vector<std::string> rejected;
};

/// Reads a JSON Lines sample file. Malformed JSON or schema violations are
/// fatal (DataError with the line number); samples failing validate_sample
/// are skipped and reported in `rejected`.
LoadResult load_samples(const std::string& path,
                        double lane_width = kDefaultLaneWidth);

void save_samples(const std::string& path,
                  const std::vector<HumanDrivingSample>& samples);

void save_model(const std::string& path, const PlannerModel& model);
PlannerModel load_model(const std::string& path);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace hlplan
