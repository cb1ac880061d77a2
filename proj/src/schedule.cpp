#include "uavswap/schedule.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace uavswap {

bool overlaps(const Window& a, const Window& b) {
  return std::max(a.start, b.start) < std::min(a.end, b.end);
}

bool is_free(const StationSchedule& schedule, const Window& candidate) {
  return std::none_of(schedule.windows.begin(), schedule.windows.end(),
                      [&](const Window& w) { return overlaps(w, candidate); });
}

StationSchedule reserve(const StationSchedule& schedule, const Window& candidate) {
  if (!is_free(schedule, candidate)) {
    throw Conflict(fmt::format("station {}: window [{}, {}) is occupied", schedule.station_id, candidate.start,
                               candidate.end));
  }
  StationSchedule next = schedule;
  const auto pos = std::upper_bound(next.windows.begin(), next.windows.end(), candidate,
                                    [](const Window& a, const Window& b) {
                                      return a.start < b.start || (a.start == b.start && a.end < b.end);
                                    });
  next.windows.insert(pos, candidate);
  return next;
}

Window blocking_window(double arrival, double margin_before, double replacement_duration, double margin_after) {
  if (!(arrival >= 0.0)) throw ValidationError(fmt::format("negative arrival time {}", arrival));
  return Window{std::max(0.0, arrival - margin_before), arrival + replacement_duration + margin_after};
}

Window blocking_window(double arrival, const PlannerConfig& config) {
  return blocking_window(arrival, config.safety_margin_before, config.replacement_duration,
                         config.safety_margin_after);
}

}  // namespace uavswap
