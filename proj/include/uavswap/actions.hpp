#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "uavswap/scenario.hpp"

namespace uavswap {

/// One-way waypoint-to-station leg costs for every (UAV, station, waypoint).
///
/// Dense [uav][station][waypoint] layout; the waypoint extent is the longest
/// mission and cells past a shorter mission's end are pruned.
class ActionCostTensor {
 public:
  ActionCostTensor() = default;
  ActionCostTensor(std::vector<Id> uav_ids, std::vector<Id> station_ids, std::size_t waypoint_extent);

  std::size_t uav_count() const { return uav_ids_.size(); }
  std::size_t station_count() const { return station_ids_.size(); }
  std::size_t waypoint_extent() const { return waypoints_; }
  const std::vector<Id>& uav_ids() const { return uav_ids_; }
  const std::vector<Id>& station_ids() const { return station_ids_; }

  double soc(std::size_t u, std::size_t s, std::size_t w) const { return soc_[index(u, s, w)]; }
  double time(std::size_t u, std::size_t s, std::size_t w) const { return time_[index(u, s, w)]; }
  bool pruned(std::size_t u, std::size_t s, std::size_t w) const { return pruned_[index(u, s, w)] != 0; }

  void set(std::size_t u, std::size_t s, std::size_t w, double time, double soc, bool pruned);

 private:
  std::size_t index(std::size_t u, std::size_t s, std::size_t w) const {
    return (u * station_ids_.size() + s) * waypoints_ + w;
  }

  std::vector<Id> uav_ids_;
  std::vector<Id> station_ids_;
  std::size_t waypoints_ = 0;
  std::vector<double> soc_;
  std::vector<double> time_;
  std::vector<unsigned char> pruned_;
};

ActionCostTensor precompute(const Scenario& scenario);

struct CandidateAction {
  std::size_t station_index = 0;
  Id station_id = 0;
  std::size_t waypoint_index = 0;
  double soc_detour = 0.0;   // round trip
  double time_detour = 0.0;  // round trip, excluding the swap itself
};

/// Non-pruned (station, waypoint) pairs with waypoint >= from_waypoint for UAV
/// index `u`, ordered by (waypoint, station id).
std::vector<CandidateAction> candidate_actions(const ActionCostTensor& tensor, std::size_t u,
                                               std::size_t from_waypoint);

/// Debug dump: uav,station,waypoint,time_s,soc,pruned.
std::string tensor_csv(const ActionCostTensor& tensor);

}  // namespace uavswap
