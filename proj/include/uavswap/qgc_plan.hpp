#pragma once

#include <string_view>
#include <vector>

#include "uavswap/geo.hpp"

namespace uavswap {

struct MissionPlanFile {
  std::vector<GeoPoint> waypoints;
  GeoPoint home;
};

/// Reads the navigation waypoints of a QGroundControl `.plan` document.
///
/// Only the coordinate-carrying navigation commands are kept (simple items and
/// the generated items nested in survey/corridor complex items). Relative
/// altitudes are converted to AMSL using the planned home position.
/// Throws ParseError, UnsupportedVersion or NoWaypoints.
MissionPlanFile parse_mission_plan(std::string_view file_contents);

}  // namespace uavswap
