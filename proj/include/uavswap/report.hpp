#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uavswap/model.hpp"
#include "uavswap/scenario.hpp"

namespace uavswap {

enum class Phase { Leg, DetourOut, Swap, DetourBack, Done };

std::string_view to_string(Phase phase);
/// Throws ParseError for unknown names.
Phase phase_from_string(std::string_view name);

struct Sample {
  double time = 0.0;
  double soc = 0.0;
  LocalPoint position;
  Phase phase = Phase::Leg;
};

/// Event samples of one UAV with strictly increasing times. SoC is linear
/// between consecutive samples, except that it holds its previous value up to
/// a Swap sample and jumps to full there.
struct Timeline {
  Id uav_id = 0;
  std::vector<Sample> samples;
};

/// Replays `plan` on `scenario` and checks every constraint: action ids and
/// waypoint order, detour cap, SoC floor, battery counts, window overlaps, and
/// agreement (1e-9) with the plan's times, schedules, timelines, makespans and
/// total cost. Throws PlanViolation on the first failure.
std::vector<Timeline> simulate(const Scenario& scenario, const Plan& plan);

/// "M:SS.cc"; minutes are not wrapped into hours.
std::string format_clock(double seconds);

enum class TableFormat { Text, Csv };

/// Columns UAV ID / Station ID / WP Index, rows by (uav, waypoint).
std::string action_table(const Plan& plan, TableFormat format = TableFormat::Text);
/// Columns Station ID / Start / End, rows by (station, start).
std::string schedule_table(const Plan& plan, TableFormat format = TableFormat::Text);

/// Columns time_s, uav_id, soc, phase; timelines in the given order.
std::string soc_csv(const std::vector<Timeline>& timelines);

struct SocCsvRow {
  double time = 0.0;
  Id uav_id = 0;
  double soc = 0.0;
  Phase phase = Phase::Leg;
};
/// Throws ParseError for malformed text.
std::vector<SocCsvRow> parse_soc_csv(std::string_view text);

/// Total cost, per-UAV makespans against no-detour mission durations, and
/// replacement counts per station and per UAV.
nlohmann::json summary_json(const Scenario& scenario, const Plan& plan);

}  // namespace uavswap
