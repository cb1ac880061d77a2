#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "uavswap/model.hpp"

namespace uavswap {

/// Euclidean distance in meters. Throws DimensionMismatch for 2-D vs 3-D input.
double distance(const LocalPoint& p1, const LocalPoint& p2);

/// Seconds to cover `d` meters at constant `speed`.
double travel_time(double d, double speed);

/// Fraction of a full battery drained by `delta_t` seconds of flight.
double soc_cost(double delta_t, double max_flight_time);

/// Predicted arrival times and SoC at each waypoint of a mission flown without detours.
///
/// Entry k refers to waypoint `start_index + k`. `elapsed` and `consumed` are the
/// cumulative time and SoC from the start position; the absolute values are
/// `start_time + elapsed` and `start_soc - consumed`. Planner and simulator both
/// derive leg costs from the cumulative arrays, so their arithmetic agrees exactly.
struct MissionProfile {
  std::size_t start_index = 0;
  double start_time = 0.0;
  double start_soc = 1.0;
  std::vector<double> elapsed;
  std::vector<double> consumed;
  std::vector<double> waypoint_times;
  std::vector<double> waypoint_soc;
  /// Last waypoint index whose predicted SoC stays at or above the floor.
  std::optional<std::size_t> feasible_until;

  std::size_t mission_size() const { return start_index + elapsed.size(); }
  bool completes() const {
    return elapsed.empty() || (feasible_until && *feasible_until + 1 == mission_size());
  }

  /// Cumulative time/SoC at the point where `progress` waypoints have been flown.
  /// `progress == start_index` is the start position itself.
  double elapsed_at(std::size_t progress) const;
  double consumed_at(std::size_t progress) const;

  /// Time and SoC to fly from the progress point to waypoint `w` (w >= progress).
  double leg_time(std::size_t progress, std::size_t w) const;
  double leg_soc(std::size_t progress, std::size_t w) const;
  /// Total SoC over every leg of the profile.
  double total_soc() const { return consumed.empty() ? 0.0 : consumed.back(); }
  double total_time() const { return elapsed.empty() ? 0.0 : elapsed.back(); }
};

MissionProfile mission_profile(const Uav& uav, const Mission& mission, std::size_t start_index,
                               Soc start_soc, double start_time, const LocalPoint& start_position,
                               double min_soc = 0.0);

/// SoC consumed by the remaining mission legs once `from_index` waypoints are flown.
double remaining_soc_to_finish(const MissionProfile& profile, std::size_t from_index);

}  // namespace uavswap
