#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "uavswap/actions.hpp"
#include "uavswap/energy.hpp"
#include "uavswap/scenario.hpp"

namespace uavswap {

/// A replacement in a UAV's remaining plan, by station index and waypoint.
struct ActionChoice {
  std::size_t station_index = 0;
  std::size_t waypoint_index = 0;
};

/// A replacement with the station window it would block.
struct PlannedSwap {
  ActionChoice choice;
  Window window;
};

/// A* search state.
///
/// `progress[u]` counts the mission waypoints UAV u has flown; the UAV sits at
/// waypoint progress[u]-1 (or at its start position before the first one).
struct Vertex {
  std::vector<std::size_t> progress;
  std::vector<double> soc_now;
  std::vector<double> clock;
  std::vector<int> charged_counts;
  std::vector<StationSchedule> schedules;
  std::vector<ReplacementAction> committed;
  double g = 0.0;  // SoC consumed by all UAVs so far

  // Round-trip detour SoC spent by each UAV, and the relaxed lower bound on the
  // detour SoC it still needs (zero in mission-only mode).
  std::vector<double> detour_soc;
  std::vector<double> detour_bound;
  // Per UAV, replacements achieving detour_bound that are still compatible with
  // the reserved windows and battery counts; nullopt when unknown.
  std::vector<std::optional<std::vector<PlannedSwap>>> bound_witness;
};

struct SearchStats {
  std::uint64_t expanded = 0;
  std::uint64_t generated = 0;
  std::uint64_t duplicates_skipped = 0;
  double wall_time = 0.0;  // s
  std::uint64_t peak_open_size = 0;
};

enum class HeuristicMode {
  /// SoC of the remaining mission legs only.
  MissionOnly,
  /// Adds, per UAV, the cheapest detour SoC that lets it finish when station
  /// inventories and schedules are ignored. Still admissible.
  RelaxedDetour,
  /// RelaxedDetour tightened per UAV against the windows and batteries already
  /// reserved by other UAVs (but not their future choices). Still admissible.
  ScheduleAware,
};

struct SearchOptions {
  double timeout_s = 600.0;
  /// Estimated size of the open list, closed set and search tree.
  std::size_t memory_limit_mb = 2048;
  HeuristicMode heuristic = HeuristicMode::ScheduleAware;
  /// Called for every vertex popped for expansion (tests, tracing).
  std::function<void(const Vertex&)> on_expand;
};

/// Precomputed data shared by the A* search and the brute-force oracle.
class PlanningProblem {
 public:
  explicit PlanningProblem(Scenario scenario, HeuristicMode mode = HeuristicMode::ScheduleAware);

  const Scenario& scenario() const { return scenario_; }
  const ActionCostTensor& tensor() const { return tensor_; }
  const std::vector<MissionProfile>& profiles() const { return profiles_; }
  HeuristicMode heuristic_mode() const { return mode_; }
  std::size_t uav_count() const { return scenario_.uavs.size(); }
  double min_soc() const { return scenario_.config.min_soc.value(); }

  Vertex root() const;
  bool is_goal(const Vertex& v) const;
  /// First unfinished UAV in expansion order; children only move this UAV.
  std::optional<std::size_t> active_uav(const Vertex& v) const;

  /// Sum over UAVs of the SoC needed for their remaining mission legs.
  double heuristic(const Vertex& v) const;
  bool finishable_without_replacement(const Vertex& v, std::size_t u) const;
  /// Relaxed lower bound on the further detour SoC UAV u needs from (progress, soc);
  /// +inf when no sequence of replacements lets it finish.
  double detour_lower_bound(std::size_t u, std::size_t progress, double soc) const;
  /// ScheduleAware mode: raises detour_bound of every UAV whose witness is
  /// unknown. Returns false when some UAV can no longer finish.
  bool tighten_bounds(Vertex& v) const;

  /// Search priority: mission SoC of every UAV plus detours spent and still
  /// bounded. Equals g + heuristic + Σ detour_bound up to rounding, and equals
  /// the plan's total cost exactly at a goal.
  double priority(const Vertex& v) const;

  std::vector<Vertex> expand(const Vertex& v) const;

  /// Total SoC of a plan: per UAV, the no-detour mission SoC plus its round trips.
  double plan_cost(const std::vector<std::vector<ActionChoice>>& per_uav) const;
  /// Builds the plan (times, schedules, timelines) for per-UAV choices in waypoint order.
  Plan assemble_plan(const std::vector<std::vector<ActionChoice>>& per_uav) const;

  /// Candidate move for the active UAV; `station_index` is unused for a finish move.
  struct Move {
    std::size_t uav = 0;
    bool finish = false;
    std::size_t station_index = 0;
    std::size_t waypoint_index = 0;
    double f = 0.0;
    double g = 0.0;
  };
  void for_each_move(const Vertex& v, const std::function<void(const Move&)>& visit) const;
  Vertex apply(const Vertex& v, const Move& move) const;
  void apply_in_place(Vertex& v, const Move& move) const;

  std::size_t station_index(Id station_id) const;
  const std::vector<std::size_t>& station_order() const { return station_order_; }

 private:
  double remaining_soc(std::size_t u, std::size_t progress) const;
  double g_with(const Vertex& v, std::size_t u, std::size_t progress, double detour) const;
  double f_with(const Vertex& v, std::size_t u, double detour, double bound) const;
  double post_swap_bound(std::size_t u, std::size_t s, std::size_t w) const;
  // Bound for the moving UAV after a swap at (s, w), reusing its witness when the
  // swap is the witness's first step.
  double child_bound(const Vertex& v, std::size_t u, std::size_t s, std::size_t w) const;
  std::pair<double, std::optional<std::vector<PlannedSwap>>> schedule_aware_bound(const Vertex& v,
                                                                                  std::size_t u) const;
  bool uses_table() const { return mode_ != HeuristicMode::MissionOnly; }

  Scenario scenario_;
  HeuristicMode mode_;
  ActionCostTensor tensor_;
  std::vector<MissionProfile> profiles_;
  std::vector<double> mission_total_;
  std::vector<int> initial_charged_;
  std::vector<std::size_t> station_order_;  // station indices by ascending id
  std::vector<std::size_t> uav_order_;      // expansion order, by descending root detour bound
  // post_swap_bound_[u][s * W + w]: detour_lower_bound right after a swap at (s, w).
  std::vector<std::vector<double>> post_swap_bound_;
};

/// Heuristic value for an arbitrary vertex: Σ remaining mission SoC.
double heuristic(const Vertex& v, std::span<const MissionProfile> profiles);
bool finishable_without_replacement(const Vertex& v, std::size_t u, std::span<const MissionProfile> profiles,
                                    double min_soc);

/// Minimum-total-SoC replacement plan. Throws Infeasible, Timeout or
/// MemoryBudgetExceeded.
std::pair<Plan, SearchStats> plan(const Scenario& scenario, const SearchOptions& options = {});

/// Exhaustive oracle over every feasible per-UAV action sequence of at most
/// `max_actions_per_uav` replacements. Throws Infeasible.
Plan brute_force_plan(const Scenario& scenario, int max_actions_per_uav);

/// Cheapest total cost reachable from `start` by exhaustive enumeration, or
/// nullopt if no completion exists within the action bound.
std::optional<double> brute_force_completion_cost(const PlanningProblem& problem, const Vertex& start,
                                                  int max_actions_per_uav);

}  // namespace uavswap
