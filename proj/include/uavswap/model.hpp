#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string_view>
#include <vector>

#include "uavswap/errors.hpp"

namespace uavswap {

using Id = int;

/// State of charge as a fraction of battery capacity in [0, 1].
class Soc {
 public:
  constexpr Soc() = default;
  explicit Soc(double value);

  constexpr double value() const { return value_; }

  /// Throws ModelViolation if the result would fall below zero.
  Soc drained(double delta) const;
  /// Throws std::logic_error if the result would exceed one.
  Soc charged(double delta) const;

  static Soc full() { return Soc(1.0); }

  friend constexpr auto operator<=>(const Soc&, const Soc&) = default;

 private:
  double value_ = 0.0;
};

/// Point in the scenario-wide local metric frame (2-D or 3-D).
class LocalPoint {
 public:
  constexpr LocalPoint() = default;
  constexpr LocalPoint(double x, double y) : coords_{x, y, 0.0}, dim_(2) {}
  constexpr LocalPoint(double x, double y, double z) : coords_{x, y, z}, dim_(3) {}

  constexpr std::size_t dim() const { return dim_; }
  constexpr double operator[](std::size_t i) const { return coords_[i]; }
  constexpr double x() const { return coords_[0]; }
  constexpr double y() const { return coords_[1]; }
  constexpr double z() const { return coords_[2]; }

  friend constexpr bool operator==(const LocalPoint&, const LocalPoint&) = default;

 private:
  std::array<double, 3> coords_{0.0, 0.0, 0.0};
  std::size_t dim_ = 2;
};

struct Battery {
  Id id = 0;
  Soc soc = Soc::full();

  friend bool operator==(const Battery&, const Battery&) = default;
};

enum class UavState { TakingOff, FlyingMission, WaitingAtStation, Done };

enum class UavEvent { ReachedFirstWaypoint, ArrivedAtStation, BatterySwapped, MissionComplete };

struct Uav {
  Id id = 0;
  double speed = 1.0;            // m/s
  double max_flight_time = 1.0;  // s, full battery to empty
  Soc initial_soc = Soc::full();
  LocalPoint start_position;
  double start_time = 0.0;  // s, clock value at start_position
  UavState state = UavState::TakingOff;

  friend bool operator==(const Uav&, const Uav&) = default;
};

struct Mission {
  Id uav_id = 0;
  std::vector<LocalPoint> waypoints;
  std::size_t completed_count = 0;

  std::size_t size() const { return waypoints.size(); }

  friend bool operator==(const Mission&, const Mission&) = default;
};

enum class StationState { Idle, Replacing };

struct Station {
  Id id = 0;
  LocalPoint position;
  int slots = 1;  // informational; replacements are serialized per station
  std::vector<Battery> batteries;
  double replacement_duration = 120.0;  // s
  StationState state = StationState::Idle;

  friend bool operator==(const Station&, const Station&) = default;
};

/// One battery swap: at `waypoint_index` the UAV detours to the station and back.
struct ReplacementAction {
  Id uav_id = 0;
  Id station_id = 0;
  std::size_t waypoint_index = 0;
  double depart_time = 0.0;   // leaves the waypoint
  double arrival_time = 0.0;  // lands on the station
  double release_time = 0.0;  // swap finished, takes off again

  friend bool operator==(const ReplacementAction&, const ReplacementAction&) = default;
};

/// Half-open reservation interval [start, end) in seconds.
struct Window {
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }

  friend bool operator==(const Window&, const Window&) = default;
};

struct StationSchedule {
  Id station_id = 0;
  std::vector<Window> windows;  // sorted by start

  friend bool operator==(const StationSchedule&, const StationSchedule&) = default;
};

struct SocKnot {
  double time = 0.0;
  double soc = 0.0;

  friend bool operator==(const SocKnot&, const SocKnot&) = default;
};

struct Plan {
  std::vector<ReplacementAction> actions;  // ordered by arrival_time
  std::vector<StationSchedule> schedules;  // one per scenario station
  // Piecewise-linear SoC per UAV. Two knots at the same time mark a swap jump.
  std::map<Id, std::vector<SocKnot>> soc_timelines;
  double total_soc_cost = 0.0;
  std::map<Id, double> makespans;  // mission completion time per UAV

  friend bool operator==(const Plan&, const Plan&) = default;
};

/// Default cut-off for counting a battery as charged.
inline constexpr double kDefaultFullThreshold = 1.0 - 1e-9;

int charged_battery_count(const Station& station, Soc full_threshold);

Uav advance_uav_state(Uav uav, UavEvent event);

std::string_view to_string(UavState state);
std::string_view to_string(UavEvent event);

}  // namespace uavswap
