#include "uavswap/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <set>

namespace uavswap {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

void check_config(const PlannerConfig& c, std::vector<std::string>& errors) {
  if (!(c.min_soc.value() < 1.0)) errors.push_back("config.min_soc: must be below 1");
  if (c.detour_time_cap && !finite_nonneg(*c.detour_time_cap)) {
    errors.push_back("config.detour_time_cap_s: must be a non-negative number");
  }
  if (!finite_nonneg(c.replacement_duration)) errors.push_back("config.replacement_duration_s: must be >= 0");
  if (!finite_nonneg(c.safety_margin_before)) errors.push_back("config.safety_margin_before_s: must be >= 0");
  if (!finite_nonneg(c.safety_margin_after)) errors.push_back("config.safety_margin_after_s: must be >= 0");
}

template <class E = ValidationError>
[[noreturn]] void fail(std::string_view what, std::vector<std::string> errors) {
  std::string message = fmt::format("{} ({} problem{})", what, errors.size(), errors.size() == 1 ? "" : "s");
  for (const auto& e : errors) message += "\n  " + e;
  throw E(std::move(message), std::move(errors));
}

double ellipse_perimeter(double a, double b) {
  return std::numbers::pi * (3.0 * (a + b) - std::sqrt((3.0 * a + b) * (a + 3.0 * b)));
}

}  // namespace

void validate(const PlannerConfig& config) {
  std::vector<std::string> errors;
  check_config(config, errors);
  if (!errors.empty()) fail("invalid planner config", std::move(errors));
}

void validate(const Scenario& s) {
  std::vector<std::string> errors;
  check_config(s.config, errors);

  if (s.uavs.empty()) errors.push_back("uavs: at least one UAV is required");
  if (s.missions.size() != s.uavs.size()) {
    errors.push_back(fmt::format("missions: expected one per UAV ({}), got {}", s.uavs.size(), s.missions.size()));
  }

  std::optional<std::size_t> dim;
  auto check_dim = [&](const LocalPoint& p, const std::string& field) {
    if (!std::isfinite(p.x()) || !std::isfinite(p.y()) || !std::isfinite(p.z())) {
      errors.push_back(field + ": non-finite coordinate");
    }
    if (!dim) {
      dim = p.dim();
    } else if (*dim != p.dim()) {
      errors.push_back(fmt::format("{}: {}-D point in a {}-D scenario", field, p.dim(), *dim));
    }
  };

  std::set<Id> uav_ids;
  for (std::size_t i = 0; i < s.uavs.size(); ++i) {
    const Uav& u = s.uavs[i];
    const std::string f = fmt::format("uavs[{}]", i);
    if (!uav_ids.insert(u.id).second) errors.push_back(fmt::format("{}.id: duplicate UAV id {}", f, u.id));
    if (!(std::isfinite(u.speed) && u.speed > 0.0)) errors.push_back(f + ".speed_mps: must be > 0");
    if (!(std::isfinite(u.max_flight_time) && u.max_flight_time > 0.0)) {
      errors.push_back(f + ".max_flight_time_s: must be > 0");
    }
    if (!finite_nonneg(u.start_time)) errors.push_back(f + ".start_time_s: must be >= 0");
    if (u.initial_soc < s.config.min_soc) {
      errors.push_back(fmt::format("{}.initial_soc: {} is below min_soc {}", f, u.initial_soc.value(),
                                   s.config.min_soc.value()));
    }
    check_dim(u.start_position, f + ".start");
    if (i < s.missions.size()) {
      const Mission& m = s.missions[i];
      if (m.uav_id != u.id) errors.push_back(fmt::format("{}.mission: belongs to UAV {}", f, m.uav_id));
      if (m.waypoints.empty()) errors.push_back(f + ".mission: no waypoints");
      if (m.completed_count > m.waypoints.size()) {
        errors.push_back(fmt::format("{}.completed_count: {} exceeds {} waypoints", f, m.completed_count,
                                     m.waypoints.size()));
      }
      for (std::size_t w = 0; w < m.waypoints.size(); ++w) {
        check_dim(m.waypoints[w], fmt::format("{}.mission[{}]", f, w));
      }
    }
  }

  std::set<Id> station_ids;
  std::set<Id> battery_ids;
  for (std::size_t i = 0; i < s.stations.size(); ++i) {
    const Station& st = s.stations[i];
    const std::string f = fmt::format("stations[{}]", i);
    if (!station_ids.insert(st.id).second) errors.push_back(fmt::format("{}.id: duplicate station id {}", f, st.id));
    if (st.slots < 1) errors.push_back(f + ".slots: must be >= 1");
    if (!finite_nonneg(st.replacement_duration)) errors.push_back(f + ".replacement_duration_s: must be >= 0");
    check_dim(st.position, f + ".position");
    for (const Battery& b : st.batteries) {
      if (!battery_ids.insert(b.id).second) {
        errors.push_back(fmt::format("{}.batteries: duplicate battery id {}", f, b.id));
      }
    }
  }

  if (!errors.empty()) fail("invalid scenario", std::move(errors));
}

void validate(const RandomScenarioParams& p) {
  std::vector<std::string> errors;
  if (p.n_uav < 1) errors.push_back("uavs: must be >= 1");
  if (p.n_station < 0) errors.push_back("stations: must be >= 0");
  if (p.batteries_per_station < 0) errors.push_back("batteries: must be >= 0");
  if (p.waypoints_per_mission < 1) errors.push_back("waypoints: must be >= 1");
  auto range = [&](Range r, std::string_view name, bool positive) {
    if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo <= r.hi)) {
      errors.push_back(fmt::format("{}: need lo <= hi", name));
    } else if (positive && !(r.lo > 0.0)) {
      errors.push_back(fmt::format("{}: must be > 0", name));
    }
  };
  range(p.speed, "speed", true);
  range(p.max_flight_time, "max_flight_time", true);
  range(p.initial_soc, "initial_soc", false);
  range(p.semi_axis, "semi_axis", true);
  range(p.mission_soc_demand, "mission_soc_demand", true);
  if (p.initial_soc.lo < 0.0 || p.initial_soc.hi > 1.0) errors.push_back("initial_soc: must lie in [0, 1]");
  if (!(std::isfinite(p.field_size) && p.field_size >= 0.0)) errors.push_back("field_size: must be >= 0");
  check_config(p.config, errors);
  if (!errors.empty()) fail<InvalidParams>("invalid scenario parameters", std::move(errors));
}

double ScenarioRng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::vector<LocalPoint> ellipse_points_at(const LocalPoint& center, std::pair<double, double> semi_axes,
                                          const std::vector<double>& angles) {
  const auto [a, b] = semi_axes;
  if (!(a > 0.0 && b > 0.0)) {
    throw InvalidParams(fmt::format("InvalidAxes: semi-axes ({}, {}) must be positive", a, b));
  }
  std::vector<LocalPoint> points;
  points.reserve(angles.size());
  for (double theta : angles) {
    const double x = center.x() + a * std::cos(theta);
    const double y = center.y() + b * std::sin(theta);
    points.push_back(center.dim() == 3 ? LocalPoint{x, y, center.z()} : LocalPoint{x, y});
  }
  return points;
}

std::vector<LocalPoint> ellipse_waypoints(const LocalPoint& center, std::pair<double, double> semi_axes,
                                          int count, ScenarioRng& rng, double revolutions) {
  if (count < 1) throw InvalidParams(fmt::format("ellipse waypoint count {} must be >= 1", count));
  if (!(semi_axes.first > 0.0 && semi_axes.second > 0.0)) {
    throw InvalidParams(
        fmt::format("InvalidAxes: semi-axes ({}, {}) must be positive", semi_axes.first, semi_axes.second));
  }
  if (!(revolutions > 0.0)) throw InvalidParams("ellipse revolutions must be > 0");
  std::vector<double> angles(static_cast<std::size_t>(count));
  for (double& theta : angles) theta = rng.uniform(0.0, 2.0 * std::numbers::pi * revolutions);
  std::sort(angles.begin(), angles.end());
  return ellipse_points_at(center, semi_axes, angles);
}

Scenario generate_random_scenario(std::uint64_t seed, const RandomScenarioParams& params) {
  validate(params);
  ScenarioRng rng(seed);
  Scenario scenario;
  scenario.config = params.config;

  for (int i = 0; i < params.n_uav; ++i) {
    Uav uav;
    uav.id = params.first_uav_id + i;
    uav.speed = rng.uniform(params.speed);
    uav.max_flight_time = rng.uniform(params.max_flight_time);
    uav.initial_soc = Soc(std::clamp(rng.uniform(params.initial_soc), 0.0, 1.0));
    const LocalPoint center{rng.uniform(0.0, params.field_size), rng.uniform(0.0, params.field_size)};
    const double a = rng.uniform(params.semi_axis);
    const double b = rng.uniform(params.semi_axis);
    const double demand = rng.uniform(params.mission_soc_demand);
    const double path_length = demand * uav.max_flight_time * uav.speed;
    const double revolutions = std::max(1.0, path_length / ellipse_perimeter(a, b));

    uav.start_position = center;
    Mission mission;
    mission.uav_id = uav.id;
    mission.waypoints = ellipse_waypoints(center, {a, b}, params.waypoints_per_mission, rng, revolutions);
    scenario.uavs.push_back(uav);
    scenario.missions.push_back(std::move(mission));
  }

  for (int k = 0; k < params.n_station; ++k) {
    Station station;
    station.id = params.first_station_id + k;
    station.position = LocalPoint{rng.uniform(0.0, params.field_size), rng.uniform(0.0, params.field_size)};
    station.replacement_duration = params.config.replacement_duration;
    for (int j = 0; j < params.batteries_per_station; ++j) {
      station.batteries.push_back(Battery{station.id * 1000 + j + 1, Soc::full()});
    }
    scenario.stations.push_back(std::move(station));
  }

  validate(scenario);
  return scenario;
}

}  // namespace uavswap
