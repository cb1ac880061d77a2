#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uavswap/scenario.hpp"

namespace uavswap {

/// Parses and validates a scenario document. Mission entries given as a path
/// to a `.plan` file are resolved against `base_dir`.
/// Throws ParseError for malformed JSON and ValidationError for bad content.
Scenario load_scenario(std::string_view contents, const std::filesystem::path& base_dir = {});
Scenario load_scenario_file(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const Scenario& scenario);
/// Stable, pretty-printed document text (byte-identical for equal scenarios).
std::string save_scenario(const Scenario& scenario);

nlohmann::json config_to_json(const PlannerConfig& config);
/// Applies the keys present in `j` on top of `base`.
PlannerConfig config_from_json(const nlohmann::json& j, PlannerConfig base = {});

/// Builds a scenario from QGroundControl mission files, one UAV per file.
///
/// The local frame is centred on the first file's planned home position. `params`
/// supplies UAV performance ("uav" defaults, optional per-file "uavs" overrides),
/// "stations" and "config"; see the README for the layout.
Scenario import_mission_plans(const std::vector<std::filesystem::path>& plan_files, const nlohmann::json& params);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace uavswap
