#pragma once

#include "uavswap/model.hpp"
#include "uavswap/scenario.hpp"

namespace uavswap {

/// True iff the two half-open windows share an interval of positive length.
bool overlaps(const Window& a, const Window& b);

bool is_free(const StationSchedule& schedule, const Window& candidate);

/// Returns a copy of `schedule` with `candidate` inserted in start order.
/// Throws Conflict if the window is occupied.
StationSchedule reserve(const StationSchedule& schedule, const Window& candidate);

/// Station occupancy for a swap whose UAV lands at `arrival`:
/// [arrival - before, arrival + duration + after], start clamped at zero.
Window blocking_window(double arrival, double margin_before, double replacement_duration, double margin_after);
Window blocking_window(double arrival, const PlannerConfig& config);

}  // namespace uavswap
