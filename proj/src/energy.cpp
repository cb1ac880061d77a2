#include "uavswap/energy.hpp"

#include <cmath>
#include <fmt/format.h>

namespace uavswap {

double distance(const LocalPoint& p1, const LocalPoint& p2) {
  if (p1.dim() != p2.dim()) {
    throw DimensionMismatch(fmt::format("distance between {}-D and {}-D points", p1.dim(), p2.dim()));
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < p1.dim(); ++j) {
    const double d = p2[j] - p1[j];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double travel_time(double d, double speed) {
  if (!(speed > 0.0)) {
    throw ValidationError(fmt::format("NonPositiveSpeed: speed {} m/s", speed));
  }
  if (!(d >= 0.0)) {
    throw ValidationError(fmt::format("negative distance {} m", d));
  }
  return d / speed;
}

double soc_cost(double delta_t, double max_flight_time) {
  if (!(max_flight_time > 0.0)) {
    throw ValidationError(fmt::format("NonPositiveFlightTime: max flight time {} s", max_flight_time));
  }
  if (!(delta_t >= 0.0)) {
    throw ValidationError(fmt::format("negative flight duration {} s", delta_t));
  }
  return delta_t / max_flight_time;
}

double MissionProfile::elapsed_at(std::size_t progress) const {
  return progress <= start_index ? 0.0 : elapsed[progress - 1 - start_index];
}

double MissionProfile::consumed_at(std::size_t progress) const {
  return progress <= start_index ? 0.0 : consumed[progress - 1 - start_index];
}

double MissionProfile::leg_time(std::size_t progress, std::size_t w) const {
  return elapsed[w - start_index] - elapsed_at(progress);
}

double MissionProfile::leg_soc(std::size_t progress, std::size_t w) const {
  return consumed[w - start_index] - consumed_at(progress);
}

MissionProfile mission_profile(const Uav& uav, const Mission& mission, std::size_t start_index,
                               Soc start_soc, double start_time, const LocalPoint& start_position,
                               double min_soc) {
  if (start_index > mission.size()) {
    throw ValidationError(
        fmt::format("start index {} beyond mission of {} waypoints", start_index, mission.size()));
  }
  MissionProfile profile;
  profile.start_index = start_index;
  profile.start_time = start_time;
  profile.start_soc = start_soc.value();

  const std::size_t n = mission.size() - start_index;
  profile.elapsed.reserve(n);
  profile.consumed.reserve(n);
  profile.waypoint_times.reserve(n);
  profile.waypoint_soc.reserve(n);

  double t = 0.0;
  double c = 0.0;
  LocalPoint here = start_position;
  for (std::size_t w = start_index; w < mission.size(); ++w) {
    const double dt = travel_time(distance(here, mission.waypoints[w]), uav.speed);
    t += dt;
    c += soc_cost(dt, uav.max_flight_time);
    profile.elapsed.push_back(t);
    profile.consumed.push_back(c);
    profile.waypoint_times.push_back(start_time + t);
    profile.waypoint_soc.push_back(profile.start_soc - c);
    here = mission.waypoints[w];
  }
  // SoC is non-increasing along the profile, so feasibility is a prefix.
  for (std::size_t k = 0; k < n && profile.waypoint_soc[k] >= min_soc; ++k) {
    profile.feasible_until = start_index + k;
  }
  return profile;
}

double remaining_soc_to_finish(const MissionProfile& profile, std::size_t from_index) {
  if (from_index >= profile.mission_size()) return 0.0;
  return profile.total_soc() - profile.consumed_at(from_index);
}

}  // namespace uavswap
