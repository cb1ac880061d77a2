#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "instances.hpp"
#include "uavswap/energy.hpp"
#include "uavswap/scenario.hpp"

using namespace uavswap;

TEST(Distance, Examples) {
  EXPECT_EQ(distance({0, 0}, {3, 4}), 5.0);
  EXPECT_EQ(distance({7, -2}, {7, -2}), 0.0);
  EXPECT_EQ(distance({1, 2, 3}, {4, 6, 3}), 5.0);
}

TEST(Distance, DimensionMismatch) { EXPECT_THROW(distance({0, 0}, {0, 0, 0}), DimensionMismatch); }

TEST(Distance, SymmetricAndTriangle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-500.0, 500.0);
  for (int i = 0; i < 1000; ++i) {
    const LocalPoint a{d(rng), d(rng), d(rng)}, b{d(rng), d(rng), d(rng)}, c{d(rng), d(rng), d(rng)};
    EXPECT_EQ(distance(a, b), distance(b, a));
    EXPECT_LE(distance(a, c), distance(a, b) + distance(b, c) + 1e-9);
  }
}

TEST(TravelTime, Examples) {
  EXPECT_EQ(travel_time(10, 5), 2.0);
  EXPECT_EQ(travel_time(0, 3), 0.0);
  EXPECT_EQ(travel_time(600, 2), 300.0);
  EXPECT_THROW(travel_time(10, 0), ValidationError);
  EXPECT_THROW(travel_time(10, -1), ValidationError);
}

TEST(SocCost, Examples) {
  EXPECT_EQ(soc_cost(60, 600), 0.1);
  EXPECT_EQ(soc_cost(0, 600), 0.0);
  EXPECT_EQ(soc_cost(600, 600), 1.0);
  EXPECT_THROW(soc_cost(10, 0), ValidationError);
}

TEST(SocCost, ScaleLinearity) {
  for (double k : {0.5, 2.0, 3.0, 7.25}) {
    const double lhs = soc_cost(k * 37.3, 911.0);
    const double rhs = k * soc_cost(37.3, 911.0);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(rhs));
  }
}

namespace {

Uav line_uav() {
  Uav u;
  u.id = 1;
  u.speed = 5.0;
  u.max_flight_time = 600.0;
  u.initial_soc = Soc(1.0);
  u.start_position = {0, 0};
  return u;
}

Mission line_mission() {
  Mission m;
  m.uav_id = 1;
  m.waypoints = {{300, 0}, {600, 0}};
  return m;
}

}  // namespace

TEST(MissionProfile, TwoLegExample) {
  const MissionProfile p = mission_profile(line_uav(), line_mission(), 0, Soc(1.0), 0.0, {0, 0});
  ASSERT_EQ(p.waypoint_times.size(), 2u);
  EXPECT_EQ(p.waypoint_times[0], 60.0);
  EXPECT_EQ(p.waypoint_times[1], 120.0);
  EXPECT_DOUBLE_EQ(p.waypoint_soc[0], 0.9);
  EXPECT_DOUBLE_EQ(p.waypoint_soc[1], 0.8);
  EXPECT_DOUBLE_EQ(remaining_soc_to_finish(p, 0), 0.2);
  EXPECT_EQ(remaining_soc_to_finish(p, 2), 0.0);
  EXPECT_TRUE(p.completes());
}

TEST(MissionProfile, EmptyAtMissionEnd) {
  const MissionProfile p = mission_profile(line_uav(), line_mission(), 2, Soc(1.0), 0.0, {600, 0});
  EXPECT_TRUE(p.waypoint_times.empty());
  EXPECT_TRUE(p.completes());
  EXPECT_EQ(remaining_soc_to_finish(p, 2), 0.0);
}

TEST(MissionProfile, FeasibleUntilStopsAtFloor) {
  // 0.1 per leg from 0.45: 0.35, 0.25, 0.15.
  Mission m;
  m.waypoints = {{300, 0}, {600, 0}, {900, 0}};
  const MissionProfile p = mission_profile(line_uav(), m, 0, Soc(0.45), 0.0, {0, 0}, 0.2);
  ASSERT_TRUE(p.feasible_until.has_value());
  EXPECT_EQ(*p.feasible_until, 1u);
  EXPECT_FALSE(p.completes());
}

TEST(MissionProfile, MatchesIndependentAccumulator) {
  const Scenario s = generate_random_scenario(0);
  for (std::size_t u = 0; u < s.uavs.size(); ++u) {
    const Uav& uav = s.uavs[u];
    const MissionProfile p =
        mission_profile(uav, s.missions[u], 0, uav.initial_soc, uav.start_time, uav.start_position);
    const auto ref = oracle::reference_profile(uav, s.missions[u]);
    ASSERT_EQ(p.waypoint_times.size(), ref.times.size());
    for (std::size_t i = 0; i < ref.times.size(); ++i) {
      EXPECT_NEAR(p.waypoint_times[i], ref.times[i], 1e-12 * ref.times[i]);
      EXPECT_NEAR(p.waypoint_soc[i], ref.soc[i], 1e-12);
    }
  }
}

TEST(MissionProfile, ConsistencyAndMonotonicity) {
  const Scenario s = generate_random_scenario(3);
  for (std::size_t u = 0; u < s.uavs.size(); ++u) {
    const Uav& uav = s.uavs[u];
    const MissionProfile p =
        mission_profile(uav, s.missions[u], 0, uav.initial_soc, uav.start_time, uav.start_position);
    for (std::size_t i = 0; i + 1 < p.waypoint_times.size(); ++i) {
      EXPECT_LE(p.waypoint_times[i], p.waypoint_times[i + 1]);
      EXPECT_GE(p.waypoint_soc[i], p.waypoint_soc[i + 1]);
      const double drop = p.waypoint_soc[i] - p.waypoint_soc[i + 1];
      const double expect = soc_cost(p.waypoint_times[i + 1] - p.waypoint_times[i], uav.max_flight_time);
      EXPECT_NEAR(drop, expect, 1e-12);
    }
  }
}

TEST(RemainingSoc, EqualsLegSum) {
  const Scenario s = generate_random_scenario(5);
  const Uav& uav = s.uavs[0];
  const Mission& m = s.missions[0];
  const MissionProfile p = mission_profile(uav, m, 0, uav.initial_soc, 0.0, uav.start_position);
  auto leg = [&](const LocalPoint& a, const LocalPoint& b) {
    return oracle::reference_distance(a, b) / uav.speed / uav.max_flight_time;
  };
  for (std::size_t from = 0; from <= m.size(); ++from) {
    // `from` waypoints flown: the UAV sits at waypoint from-1, or at its start.
    double sum = 0.0;
    for (std::size_t w = from; w < m.size(); ++w) {
      sum += leg(w == 0 ? uav.start_position : m.waypoints[w - 1], m.waypoints[w]);
    }
    EXPECT_NEAR(remaining_soc_to_finish(p, from), sum, 1e-12) << "from " << from;
  }
}
