#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "uavswap/model.hpp"
#include "uavswap/planner.hpp"

namespace uavswap {

nlohmann::json plan_to_json(const Plan& plan);
/// Throws ParseError for malformed documents.
Plan plan_from_json(const nlohmann::json& j);

/// Pretty-printed plan document. Contains no timing data, so equal plans
/// serialize to identical bytes.
std::string save_plan(const Plan& plan);
Plan load_plan(std::string_view contents);

nlohmann::json stats_to_json(const SearchStats& stats);

}  // namespace uavswap
