#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "uavswap/geo.hpp"
#include "uavswap/model.hpp"

namespace uavswap {

struct PlannerConfig {
  Soc min_soc{0.2};
  /// One-way waypoint-to-station flight time above which an action is pruned.
  std::optional<double> detour_time_cap;
  /// Used for stations whose document entry omits a replacement duration.
  double replacement_duration = 120.0;
  double safety_margin_before = 30.0;
  double safety_margin_after = 30.0;
  Soc full_threshold{kDefaultFullThreshold};

  friend bool operator==(const PlannerConfig&, const PlannerConfig&) = default;
};

/// Immutable problem instance. Missions are index-aligned with `uavs`.
struct Scenario {
  std::vector<Uav> uavs;
  std::vector<Mission> missions;
  std::vector<Station> stations;
  PlannerConfig config;
  std::optional<GeoPoint> origin;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws ValidationError listing every violated field.
void validate(const Scenario& scenario);
void validate(const PlannerConfig& config);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct RandomScenarioParams {
  int n_uav = 6;
  int n_station = 5;
  int batteries_per_station = 10;
  int waypoints_per_mission = 50;
  Range speed{2.0, 6.0};               // m/s
  Range max_flight_time{600.0, 1200.0};  // s
  Range initial_soc{0.6, 1.0};
  double field_size = 1000.0;          // mission centers and stations, square side in m
  Range semi_axis{100.0, 300.0};       // m
  /// No-detour mission energy as a multiple of one full battery; sets how many
  /// times the UAV circles its ellipse.
  Range mission_soc_demand{1.1, 1.6};
  int first_uav_id = 1;
  int first_station_id = 201;
  PlannerConfig config;
};

void validate(const RandomScenarioParams& params);

/// Deterministic scenario RNG. Uniform draws use the top 53 bits of a
/// 64-bit Mersenne twister so streams are identical across standard libraries.
class ScenarioRng {
 public:
  explicit ScenarioRng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi);
  double uniform(Range r) { return uniform(r.lo, r.hi); }

 private:
  std::mt19937_64 engine_;
};

/// `count` points on an axis-aligned ellipse at ascending angles drawn uniformly
/// from [0, 2*pi*revolutions). Throws InvalidParams for non-positive axes or count.
std::vector<LocalPoint> ellipse_waypoints(const LocalPoint& center, std::pair<double, double> semi_axes,
                                          int count, ScenarioRng& rng, double revolutions = 1.0);

/// Same ellipse, explicit angles (radians), kept in the given order.
std::vector<LocalPoint> ellipse_points_at(const LocalPoint& center, std::pair<double, double> semi_axes,
                                          const std::vector<double>& angles);

Scenario generate_random_scenario(std::uint64_t seed, const RandomScenarioParams& params = {});

}  // namespace uavswap
