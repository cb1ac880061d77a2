#include "uavswap/actions.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <numeric>

#include "uavswap/energy.hpp"

namespace uavswap {

ActionCostTensor::ActionCostTensor(std::vector<Id> uav_ids, std::vector<Id> station_ids,
                                   std::size_t waypoint_extent)
    : uav_ids_(std::move(uav_ids)), station_ids_(std::move(station_ids)), waypoints_(waypoint_extent) {
  const std::size_t cells = uav_ids_.size() * station_ids_.size() * waypoints_;
  soc_.assign(cells, 0.0);
  time_.assign(cells, 0.0);
  pruned_.assign(cells, 1);
}

void ActionCostTensor::set(std::size_t u, std::size_t s, std::size_t w, double time, double soc, bool pruned) {
  const std::size_t i = index(u, s, w);
  time_[i] = time;
  soc_[i] = soc;
  pruned_[i] = pruned ? 1 : 0;
}

ActionCostTensor precompute(const Scenario& scenario) {
  std::vector<Id> uav_ids;
  std::vector<Id> station_ids;
  std::size_t extent = 0;
  for (std::size_t u = 0; u < scenario.uavs.size(); ++u) {
    uav_ids.push_back(scenario.uavs[u].id);
    extent = std::max(extent, scenario.missions[u].size());
  }
  for (const Station& st : scenario.stations) station_ids.push_back(st.id);

  ActionCostTensor tensor(uav_ids, station_ids, extent);
  const auto& cap = scenario.config.detour_time_cap;
  for (std::size_t u = 0; u < scenario.uavs.size(); ++u) {
    const Uav& uav = scenario.uavs[u];
    const Mission& mission = scenario.missions[u];
    for (std::size_t s = 0; s < scenario.stations.size(); ++s) {
      for (std::size_t w = 0; w < mission.size(); ++w) {
        const double t = travel_time(distance(mission.waypoints[w], scenario.stations[s].position), uav.speed);
        const double c = soc_cost(t, uav.max_flight_time);
        const bool pruned = w < mission.completed_count || (cap && t > *cap);
        tensor.set(u, s, w, t, c, pruned);
      }
    }
  }
  return tensor;
}

std::vector<CandidateAction> candidate_actions(const ActionCostTensor& tensor, std::size_t u,
                                               std::size_t from_waypoint) {
  std::vector<std::size_t> order(tensor.station_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return tensor.station_ids()[a] < tensor.station_ids()[b];
  });

  std::vector<CandidateAction> out;
  for (std::size_t w = from_waypoint; w < tensor.waypoint_extent(); ++w) {
    for (std::size_t s : order) {
      if (tensor.pruned(u, s, w)) continue;
      out.push_back({s, tensor.station_ids()[s], w, 2.0 * tensor.soc(u, s, w), 2.0 * tensor.time(u, s, w)});
    }
  }
  return out;
}

std::string tensor_csv(const ActionCostTensor& tensor) {
  std::string out = "uav,station,waypoint,time_s,soc,pruned\n";
  for (std::size_t u = 0; u < tensor.uav_count(); ++u) {
    for (std::size_t s = 0; s < tensor.station_count(); ++s) {
      for (std::size_t w = 0; w < tensor.waypoint_extent(); ++w) {
        out += fmt::format("{},{},{},{:.17g},{:.17g},{}\n", tensor.uav_ids()[u], tensor.station_ids()[s], w,
                           tensor.time(u, s, w), tensor.soc(u, s, w), tensor.pruned(u, s, w) ? 1 : 0);
      }
    }
  }
  return out;
}

}  // namespace uavswap
