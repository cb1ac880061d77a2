#include "uavswap/model.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace uavswap {

Soc::Soc(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ValidationError(fmt::format("state of charge {} outside [0, 1]", value));
  }
}

Soc Soc::drained(double delta) const {
  const double next = value_ - delta;
  if (next < 0.0) {
    throw ModelViolation(fmt::format("state of charge drained below zero ({} - {})", value_, delta));
  }
  return Soc(std::min(next, 1.0));
}

Soc Soc::charged(double delta) const {
  const double next = value_ + delta;
  if (next > 1.0) {
    throw std::logic_error(fmt::format("state of charge charged above one ({} + {})", value_, delta));
  }
  return Soc(std::max(next, 0.0));
}

int charged_battery_count(const Station& station, Soc full_threshold) {
  return static_cast<int>(std::count_if(station.batteries.begin(), station.batteries.end(),
                                        [&](const Battery& b) { return b.soc >= full_threshold; }));
}

Uav advance_uav_state(Uav uav, UavEvent event) {
  using S = UavState;
  using E = UavEvent;
  const S from = uav.state;
  switch (from) {
    case S::TakingOff:
      if (event == E::ReachedFirstWaypoint) uav.state = S::FlyingMission;
      break;
    case S::FlyingMission:
      if (event == E::ArrivedAtStation) uav.state = S::WaitingAtStation;
      if (event == E::MissionComplete) uav.state = S::Done;
      break;
    case S::WaitingAtStation:
      if (event == E::BatterySwapped) uav.state = S::FlyingMission;
      break;
    case S::Done:
      break;
  }
  if (uav.state == from) {
    throw IllegalTransition(
        fmt::format("UAV {}: event {} not allowed in state {}", uav.id, to_string(event), to_string(from)));
  }
  return uav;
}

std::string_view to_string(UavState state) {
  switch (state) {
    case UavState::TakingOff: return "TakingOff";
    case UavState::FlyingMission: return "FlyingMission";
    case UavState::WaitingAtStation: return "WaitingAtStation";
    case UavState::Done: return "Done";
  }
  return "?";
}

std::string_view to_string(UavEvent event) {
  switch (event) {
    case UavEvent::ReachedFirstWaypoint: return "ReachedFirstWaypoint";
    case UavEvent::ArrivedAtStation: return "ArrivedAtStation";
    case UavEvent::BatterySwapped: return "BatterySwapped";
    case UavEvent::MissionComplete: return "MissionComplete";
  }
  return "?";
}

}  // namespace uavswap
