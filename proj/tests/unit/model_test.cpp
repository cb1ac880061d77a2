#include <gtest/gtest.h>

#include "uavswap/model.hpp"

using namespace uavswap;

TEST(Soc, RejectsOutOfRange) {
  EXPECT_THROW(Soc(-0.01), ValidationError);
  EXPECT_THROW(Soc(1.01), ValidationError);
  EXPECT_NO_THROW(Soc(0.0));
  EXPECT_NO_THROW(Soc(1.0));
}

TEST(Soc, DrainBelowZeroIsModelViolation) {
  EXPECT_THROW(Soc(0.1).drained(0.2), ModelViolation);
  EXPECT_DOUBLE_EQ(Soc(0.5).drained(0.2).value(), 0.3);
}

TEST(Soc, ChargeAboveOneIsLogicError) {
  EXPECT_THROW(Soc(0.9).charged(0.2), std::logic_error);
  EXPECT_DOUBLE_EQ(Soc(0.5).charged(0.5).value(), 1.0);
}

namespace {

Station station_with(std::initializer_list<double> socs) {
  Station s;
  s.id = 1;
  int id = 0;
  for (double v : socs) s.batteries.push_back({++id, Soc(v)});
  return s;
}

}  // namespace

TEST(ChargedBatteryCount, CountsAtOrAboveThreshold) {
  EXPECT_EQ(charged_battery_count(station_with({1.0, 1.0, 0.3}), Soc(0.95)), 2);
}

TEST(ChargedBatteryCount, TenFullBatteries) {
  Station s;
  for (int i = 0; i < 10; ++i) s.batteries.push_back({i, Soc(1.0)});
  EXPECT_EQ(charged_battery_count(s, Soc(kDefaultFullThreshold)), 10);
}

TEST(ChargedBatteryCount, Empty) { EXPECT_EQ(charged_battery_count(Station{}, Soc(0.95)), 0); }

TEST(UavState, DefinedTransitions) {
  Uav u;
  u = advance_uav_state(u, UavEvent::ReachedFirstWaypoint);
  EXPECT_EQ(u.state, UavState::FlyingMission);
  u = advance_uav_state(u, UavEvent::ArrivedAtStation);
  EXPECT_EQ(u.state, UavState::WaitingAtStation);
  u = advance_uav_state(u, UavEvent::BatterySwapped);
  EXPECT_EQ(u.state, UavState::FlyingMission);
  u = advance_uav_state(u, UavEvent::MissionComplete);
  EXPECT_EQ(u.state, UavState::Done);
}

TEST(UavState, DoneIsTerminal) {
  Uav u;
  u.state = UavState::Done;
  for (auto e : {UavEvent::ReachedFirstWaypoint, UavEvent::ArrivedAtStation, UavEvent::BatterySwapped,
                 UavEvent::MissionComplete}) {
    EXPECT_THROW(advance_uav_state(u, e), IllegalTransition);
  }
}

TEST(UavState, SkippingStatesIsIllegal) {
  Uav u;
  EXPECT_THROW(advance_uav_state(u, UavEvent::ArrivedAtStation), IllegalTransition);
  u.state = UavState::WaitingAtStation;
  EXPECT_THROW(advance_uav_state(u, UavEvent::MissionComplete), IllegalTransition);
}
