#include <fmt/format.h>
#include <limits>

#include "uavswap/planner.hpp"
#include "uavswap/schedule.hpp"

namespace uavswap {

namespace {

struct Reservation {
  std::size_t station = 0;
  Window window;
};

// One complete course of action for a single UAV from the start state.
struct Sequence {
  std::vector<ActionChoice> choices;
  std::vector<Reservation> reservations;
  double detour = 0.0;
};

class Enumerator {
 public:
  Enumerator(const PlanningProblem& problem, const Vertex& start, int max_actions)
      : problem_(problem), start_(start), max_actions_(max_actions) {}

  std::optional<double> solve(std::vector<std::vector<ActionChoice>>* best_choices) {
    const std::size_t n = problem_.uav_count();
    sequences_.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
      Sequence seq;
      seq.detour = start_.detour_soc[u];
      enumerate(u, start_.progress[u], start_.soc_now[u], start_.clock[u], seq, 0);
      if (sequences_[u].empty()) return std::nullopt;
    }
    counts_ = start_.charged_counts;
    schedules_ = start_.schedules;
    picked_.assign(n, 0);
    combine(0);
    if (!best_) return std::nullopt;
    if (best_choices) *best_choices = best_picks_;
    return best_;
  }

 private:
  // Same feasibility rules as the A* expansion, without inventories and schedules;
  // those couple UAVs and are checked when sequences are combined.
  void enumerate(std::size_t u, std::size_t p, double soc, double clock, Sequence& seq, int depth) {
    const Scenario& sc = problem_.scenario();
    const MissionProfile& prof = problem_.profiles()[u];
    const ActionCostTensor& tensor = problem_.tensor();
    const double floor = problem_.min_soc();
    const std::size_t n = sc.missions[u].size();
    if (p >= n || soc - remaining_soc_to_finish(prof, p) >= floor) {
      sequences_[u].push_back(seq);
      return;
    }
    if (depth >= max_actions_) return;
    for (std::size_t w = p; w < n; ++w) {
      const double at_w = soc - prof.leg_soc(p, w);
      if (at_w < floor) break;
      const double depart = clock + prof.leg_time(p, w);
      for (std::size_t s : problem_.station_order()) {
        if (tensor.pruned(u, s, w)) continue;
        const double c = tensor.soc(u, s, w);
        if (at_w - c < floor || 1.0 - c < floor) continue;
        const Station& station = sc.stations[s];
        const double arrival = depart + tensor.time(u, s, w);
        const double release = arrival + station.replacement_duration;
        const Window window = blocking_window(arrival, sc.config.safety_margin_before,
                                              station.replacement_duration, sc.config.safety_margin_after);
        const double saved_detour = seq.detour;
        seq.choices.push_back({s, w});
        seq.reservations.push_back({s, window});
        seq.detour = saved_detour + 2.0 * c;
        enumerate(u, w + 1, 1.0 - c, release + tensor.time(u, s, w), seq, depth + 1);
        seq.detour = saved_detour;
        seq.choices.pop_back();
        seq.reservations.pop_back();
      }
    }
  }

  void combine(std::size_t u) {
    if (u == problem_.uav_count()) {
      double total = 0.0;
      for (std::size_t k = 0; k < picked_.size(); ++k) {
        total += problem_.profiles()[k].total_soc() + sequences_[k][picked_[k]].detour;
      }
      if (!best_ || total < *best_) {
        best_ = total;
        best_picks_.assign(picked_.size(), {});
        for (std::size_t k = 0; k < picked_.size(); ++k) {
          best_picks_[k] = start_choices(k);
          const auto& more = sequences_[k][picked_[k]].choices;
          best_picks_[k].insert(best_picks_[k].end(), more.begin(), more.end());
        }
      }
      return;
    }
    for (std::size_t i = 0; i < sequences_[u].size(); ++i) {
      const Sequence& seq = sequences_[u][i];
      std::size_t placed = 0;
      bool ok = true;
      for (const Reservation& r : seq.reservations) {
        if (counts_[r.station] <= 0 || !is_free(schedules_[r.station], r.window)) {
          ok = false;
          break;
        }
        counts_[r.station] -= 1;
        schedules_[r.station].windows.push_back(r.window);
        ++placed;
      }
      if (ok) {
        picked_[u] = i;
        combine(u + 1);
      }
      for (std::size_t k = placed; k-- > 0;) {
        const Reservation& r = seq.reservations[k];
        counts_[r.station] += 1;
        schedules_[r.station].windows.pop_back();
      }
    }
  }

  // Replacements already committed in the start vertex for UAV u.
  std::vector<ActionChoice> start_choices(std::size_t u) const {
    std::vector<ActionChoice> out;
    const Id id = problem_.scenario().uavs[u].id;
    for (const ReplacementAction& a : start_.committed) {
      if (a.uav_id == id) out.push_back({problem_.station_index(a.station_id), a.waypoint_index});
    }
    return out;
  }

  const PlanningProblem& problem_;
  const Vertex& start_;
  int max_actions_;
  std::vector<std::vector<Sequence>> sequences_;
  std::vector<int> counts_;
  std::vector<StationSchedule> schedules_;
  std::vector<std::size_t> picked_;
  std::optional<double> best_;
  std::vector<std::vector<ActionChoice>> best_picks_;
};

}  // namespace

std::optional<double> brute_force_completion_cost(const PlanningProblem& problem, const Vertex& start,
                                                  int max_actions_per_uav) {
  Enumerator e(problem, start, max_actions_per_uav);
  return e.solve(nullptr);
}

Plan brute_force_plan(const Scenario& scenario, int max_actions_per_uav) {
  const PlanningProblem problem(scenario, HeuristicMode::MissionOnly);
  const Vertex start = problem.root();
  Enumerator e(problem, start, max_actions_per_uav);
  std::vector<std::vector<ActionChoice>> choices;
  if (!e.solve(&choices)) {
    throw Infeasible(fmt::format("no plan with at most {} replacements per UAV", max_actions_per_uav));
  }
  return problem.assemble_plan(choices);
}

}  // namespace uavswap
