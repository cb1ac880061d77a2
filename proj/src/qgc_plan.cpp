#include "uavswap/qgc_plan.hpp"

#include <array>
#include <algorithm>
#include <fmt/format.h>
#include <json.hpp>

namespace uavswap {

namespace {

using nlohmann::json;

// MAV_CMD ids of navigation commands whose params[4..6] hold a position.
constexpr std::array kSpatialCommands = {
    16,  // NAV_WAYPOINT
    17,  // NAV_LOITER_UNLIM
    18,  // NAV_LOITER_TURNS
    19,  // NAV_LOITER_TIME
    21,  // NAV_LAND
    22,  // NAV_TAKEOFF
    31,  // NAV_LOITER_TO_ALT
    82,  // NAV_SPLINE_WAYPOINT
    84,  // NAV_VTOL_TAKEOFF
    85,  // NAV_VTOL_LAND
};

// MAV_FRAME values.
constexpr int kFrameGlobal = 0;
constexpr int kFrameGlobalRelativeAlt = 3;
constexpr int kFrameGlobalInt = 5;

bool is_number(const json& j) { return j.is_number(); }

GeoPoint home_position(const json& mission) {
  const auto it = mission.find("plannedHomePosition");
  if (it == mission.end() || !it->is_array() || it->size() < 2 || !is_number((*it)[0]) || !is_number((*it)[1])) {
    throw ParseError("mission.plannedHomePosition must be an array [lat, lon, alt]");
  }
  GeoPoint home{(*it)[0].get<double>(), (*it)[1].get<double>(), std::nullopt};
  if (it->size() >= 3 && is_number((*it)[2])) home.altitude = (*it)[2].get<double>();
  try {
    validate(home);
  } catch (const InvalidGeoPoint& e) {
    throw ParseError(fmt::format("plannedHomePosition: {}", e.what()));
  }
  return home;
}

void collect_items(const json& items, const GeoPoint& home, std::vector<GeoPoint>& out);

void collect_simple(const json& item, const GeoPoint& home, std::vector<GeoPoint>& out) {
  const int command = item.value("command", -1);
  if (std::find(kSpatialCommands.begin(), kSpatialCommands.end(), command) == kSpatialCommands.end()) return;
  const auto params = item.find("params");
  if (params == item.end() || !params->is_array() || params->size() < 7) {
    throw ParseError(fmt::format("mission item (command {}) lacks a 7-element params array", command));
  }
  const json& lat = (*params)[4];
  const json& lon = (*params)[5];
  if (!is_number(lat) || !is_number(lon)) return;
  GeoPoint p{lat.get<double>(), lon.get<double>(), std::nullopt};
  // Takeoff/land items without an explicit position are stored as 0/0 by QGC.
  if (p.latitude == 0.0 && p.longitude == 0.0) return;
  const json& alt = (*params)[6];
  if (is_number(alt)) {
    const int frame = item.value("frame", kFrameGlobalRelativeAlt);
    double a = alt.get<double>();
    // Relative and terrain frames are taken relative to home.
    if (frame != kFrameGlobal && frame != kFrameGlobalInt) a += home.altitude.value_or(0.0);
    p.altitude = a;
  }
  try {
    validate(p);
  } catch (const InvalidGeoPoint& e) {
    throw ParseError(fmt::format("mission item (command {}): {}", command, e.what()));
  }
  out.push_back(p);
}

void collect_item(const json& item, const GeoPoint& home, std::vector<GeoPoint>& out) {
  if (!item.is_object()) throw ParseError("mission item is not an object");
  const std::string type = item.value("type", "SimpleItem");
  if (type == "SimpleItem") {
    collect_simple(item, home, out);
  } else if (type == "ComplexItem") {
    // Survey, corridor scan and structure scan store their generated flight path here.
    const auto transect = item.find("TransectStyleComplexItem");
    if (transect != item.end() && transect->contains("Items")) {
      collect_items((*transect)["Items"], home, out);
    } else if (item.contains("Items")) {
      collect_items(item["Items"], home, out);
    }
  } else {
    throw ParseError(fmt::format("unknown mission item type '{}'", type));
  }
}

void collect_items(const json& items, const GeoPoint& home, std::vector<GeoPoint>& out) {
  if (!items.is_array()) throw ParseError("mission items must be an array");
  for (const auto& item : items) collect_item(item, home, out);
}

}  // namespace

MissionPlanFile parse_mission_plan(std::string_view file_contents) {
  json doc;
  try {
    doc = json::parse(file_contents);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("not a JSON document: {}", e.what()));
  }
  if (!doc.is_object()) throw ParseError("plan document must be a JSON object");
  if (doc.value("fileType", std::string{}) != "Plan") throw ParseError("fileType is not \"Plan\"");
  if (doc.value("version", 0) != 1) {
    throw UnsupportedVersion(fmt::format("plan file version {} (expected 1)", doc.value("version", 0)));
  }
  const auto mission = doc.find("mission");
  if (mission == doc.end() || !mission->is_object()) throw ParseError("missing \"mission\" object");
  if (mission->value("version", 0) != 2) {
    throw UnsupportedVersion(fmt::format("mission version {} (expected 2)", mission->value("version", 0)));
  }

  MissionPlanFile result;
  try {
    result.home = home_position(*mission);
    const auto items = mission->find("items");
    if (items == mission->end()) throw ParseError("mission has no \"items\" array");
    collect_items(*items, result.home, result.waypoints);
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("malformed mission: {}", e.what()));
  }
  if (result.waypoints.empty()) throw NoWaypoints("mission contains no navigation waypoints");
  return result;
}

}  // namespace uavswap
