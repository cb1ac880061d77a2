#include "uavswap/plan_io.hpp"

#include <fmt/format.h>

#include "uavswap/errors.hpp"

namespace uavswap {

namespace {

using nlohmann::json;

constexpr std::string_view kFormat = "uavswap-plan";
constexpr int kVersion = 1;

}  // namespace

json plan_to_json(const Plan& plan) {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["total_soc_cost"] = plan.total_soc_cost;

  json actions = json::array();
  for (const ReplacementAction& a : plan.actions) {
    actions.push_back({{"uav_id", a.uav_id},
                       {"station_id", a.station_id},
                       {"waypoint_index", a.waypoint_index},
                       {"depart_s", a.depart_time},
                       {"arrival_s", a.arrival_time},
                       {"release_s", a.release_time}});
  }
  j["actions"] = std::move(actions);

  json schedules = json::array();
  for (const StationSchedule& s : plan.schedules) {
    json windows = json::array();
    for (const Window& w : s.windows) windows.push_back({{"start_s", w.start}, {"end_s", w.end}});
    schedules.push_back({{"station_id", s.station_id}, {"windows", std::move(windows)}});
  }
  j["schedules"] = std::move(schedules);

  json makespans = json::array();
  for (const auto& [id, t] : plan.makespans) makespans.push_back({{"uav_id", id}, {"makespan_s", t}});
  j["makespans"] = std::move(makespans);

  json timelines = json::array();
  for (const auto& [id, knots] : plan.soc_timelines) {
    json pts = json::array();
    for (const SocKnot& k : knots) pts.push_back({k.time, k.soc});
    timelines.push_back({{"uav_id", id}, {"knots", std::move(pts)}});
  }
  j["soc_timelines"] = std::move(timelines);
  return j;
}

Plan plan_from_json(const json& j) {
  try {
    if (!j.is_object() || j.value("format", std::string{}) != kFormat) {
      throw ParseError("not a uavswap plan document");
    }
    if (j.at("version").get<int>() != kVersion) {
      throw UnsupportedVersion(fmt::format("plan version {} is not supported", j.at("version").dump()));
    }
    Plan plan;
    plan.total_soc_cost = j.at("total_soc_cost").get<double>();
    for (const json& a : j.at("actions")) {
      plan.actions.push_back(ReplacementAction{a.at("uav_id").get<Id>(), a.at("station_id").get<Id>(),
                                               a.at("waypoint_index").get<std::size_t>(),
                                               a.at("depart_s").get<double>(), a.at("arrival_s").get<double>(),
                                               a.at("release_s").get<double>()});
    }
    for (const json& s : j.at("schedules")) {
      StationSchedule sched{s.at("station_id").get<Id>(), {}};
      for (const json& w : s.at("windows")) {
        sched.windows.push_back(Window{w.at("start_s").get<double>(), w.at("end_s").get<double>()});
      }
      plan.schedules.push_back(std::move(sched));
    }
    for (const json& m : j.at("makespans")) plan.makespans[m.at("uav_id").get<Id>()] = m.at("makespan_s").get<double>();
    for (const json& t : j.at("soc_timelines")) {
      auto& knots = plan.soc_timelines[t.at("uav_id").get<Id>()];
      for (const json& k : t.at("knots")) knots.push_back(SocKnot{k.at(0).get<double>(), k.at(1).get<double>()});
    }
    return plan;
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("malformed plan document: {}", e.what()));
  }
}

std::string save_plan(const Plan& plan) { return plan_to_json(plan).dump(2) + "\n"; }

Plan load_plan(std::string_view contents) {
  json j;
  try {
    j = json::parse(contents);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("plan is not valid JSON: {}", e.what()));
  }
  return plan_from_json(j);
}

json stats_to_json(const SearchStats& stats) {
  return {{"expanded", stats.expanded},
          {"generated", stats.generated},
          {"duplicates_skipped", stats.duplicates_skipped},
          {"peak_open_size", stats.peak_open_size},
          {"wall_time_s", stats.wall_time}};
}

}  // namespace uavswap
