#include "uavswap/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <memory>
#include <numeric>
#include <queue>
#include <unordered_set>

#include "uavswap/schedule.hpp"

namespace uavswap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using StateKey = std::vector<std::int64_t>;

// Quantized full-state key: SoC to 1e-6, times to 1 ms.
StateKey state_key(const Vertex& v) {
  StateKey key;
  key.reserve(v.progress.size() * 3 + v.charged_counts.size() * 2 + 8);
  for (std::size_t u = 0; u < v.progress.size(); ++u) {
    key.push_back(static_cast<std::int64_t>(v.progress[u]));
    key.push_back(std::llround(v.soc_now[u] * 1e6));
    key.push_back(std::llround(v.clock[u] * 1e3));
  }
  for (std::size_t s = 0; s < v.charged_counts.size(); ++s) {
    key.push_back(v.charged_counts[s]);
    key.push_back(static_cast<std::int64_t>(v.schedules[s].windows.size()));
    for (const Window& w : v.schedules[s].windows) key.push_back(std::llround(w.start * 1e3));
  }
  return key;
}

}  // namespace

PlanningProblem::PlanningProblem(Scenario scenario, HeuristicMode mode)
    : scenario_(std::move(scenario)), mode_(mode) {
  validate(scenario_);
  tensor_ = precompute(scenario_);
  const double floor = min_soc();
  for (std::size_t u = 0; u < scenario_.uavs.size(); ++u) {
    const Uav& uav = scenario_.uavs[u];
    const Mission& m = scenario_.missions[u];
    profiles_.push_back(
        mission_profile(uav, m, m.completed_count, uav.initial_soc, uav.start_time, uav.start_position, floor));
    mission_total_.push_back(profiles_.back().total_soc());
  }
  for (const Station& st : scenario_.stations) {
    initial_charged_.push_back(charged_battery_count(st, scenario_.config.full_threshold));
  }
  station_order_.resize(scenario_.stations.size());
  std::iota(station_order_.begin(), station_order_.end(), std::size_t{0});
  std::stable_sort(station_order_.begin(), station_order_.end(), [&](std::size_t a, std::size_t b) {
    return scenario_.stations[a].id < scenario_.stations[b].id;
  });

  uav_order_.resize(uav_count());
  std::iota(uav_order_.begin(), uav_order_.end(), std::size_t{0});
  post_swap_bound_.resize(uav_count());
  if (!uses_table()) return;
  const std::size_t S = tensor_.station_count();
  const std::size_t W = tensor_.waypoint_extent();
  for (std::size_t u = 0; u < uav_count(); ++u) {
    auto& table = post_swap_bound_[u];
    table.assign(S * W, kInf);
    const Mission& m = scenario_.missions[u];
    // A swap at w only looks at later waypoints, so fill from the mission end backwards.
    for (std::size_t w = m.size(); w-- > m.completed_count;) {
      for (std::size_t s = 0; s < S; ++s) {
        if (tensor_.pruned(u, s, w)) continue;
        const double after = 1.0 - tensor_.soc(u, s, w);
        if (after < floor) continue;
        table[s * W + w] = detour_lower_bound(u, w + 1, after);
      }
    }
  }

  // UAVs needing the most detour go first, so their conflicts surface near the root.
  std::vector<double> need(uav_count());
  for (std::size_t u = 0; u < uav_count(); ++u) {
    need[u] = detour_lower_bound(u, scenario_.missions[u].completed_count, scenario_.uavs[u].initial_soc.value());
  }
  std::stable_sort(uav_order_.begin(), uav_order_.end(), [&](std::size_t a, std::size_t b) { return need[a] > need[b]; });
}

std::size_t PlanningProblem::station_index(Id station_id) const {
  const auto& ids = tensor_.station_ids();
  const auto it = std::find(ids.begin(), ids.end(), station_id);
  if (it == ids.end()) throw ValidationError(fmt::format("unknown station id {}", station_id));
  return static_cast<std::size_t>(it - ids.begin());
}

double PlanningProblem::remaining_soc(std::size_t u, std::size_t progress) const {
  return remaining_soc_to_finish(profiles_[u], progress);
}

Vertex PlanningProblem::root() const {
  Vertex v;
  const std::size_t n = uav_count();
  for (std::size_t u = 0; u < n; ++u) {
    v.progress.push_back(scenario_.missions[u].completed_count);
    v.soc_now.push_back(scenario_.uavs[u].initial_soc.value());
    v.clock.push_back(scenario_.uavs[u].start_time);
  }
  v.charged_counts = initial_charged_;
  for (const Station& st : scenario_.stations) v.schedules.push_back(StationSchedule{st.id, {}});
  v.detour_soc.assign(n, 0.0);
  v.detour_bound.assign(n, 0.0);
  v.bound_witness.assign(n, std::nullopt);
  for (std::size_t u = 0; u < n; ++u) v.detour_bound[u] = detour_lower_bound(u, v.progress[u], v.soc_now[u]);
  v.g = g_with(v, n, 0, 0.0);
  return v;
}

bool PlanningProblem::is_goal(const Vertex& v) const { return !active_uav(v).has_value(); }

std::optional<std::size_t> PlanningProblem::active_uav(const Vertex& v) const {
  for (std::size_t u : uav_order_) {
    if (v.progress[u] < scenario_.missions[u].size()) return u;
  }
  return std::nullopt;
}

double PlanningProblem::heuristic(const Vertex& v) const { return uavswap::heuristic(v, profiles_); }

bool PlanningProblem::finishable_without_replacement(const Vertex& v, std::size_t u) const {
  return v.soc_now[u] - remaining_soc(u, v.progress[u]) >= min_soc();
}

double PlanningProblem::detour_lower_bound(std::size_t u, std::size_t progress, double soc) const {
  if (!uses_table()) return 0.0;
  const double floor = min_soc();
  if (soc - remaining_soc(u, progress) >= floor) return 0.0;
  const MissionProfile& prof = profiles_[u];
  const auto& table = post_swap_bound_[u];
  const std::size_t W = tensor_.waypoint_extent();
  double best = kInf;
  for (std::size_t w = progress; w < scenario_.missions[u].size(); ++w) {
    const double at_w = soc - prof.leg_soc(progress, w);
    if (at_w < floor) break;
    for (std::size_t s = 0; s < tensor_.station_count(); ++s) {
      if (tensor_.pruned(u, s, w)) continue;
      const double c = tensor_.soc(u, s, w);
      if (at_w - c < floor || 1.0 - c < floor) continue;
      const double rest = table[s * W + w];
      if (rest == kInf) continue;
      best = std::min(best, 2.0 * c + rest);
    }
  }
  return best;
}

double PlanningProblem::g_with(const Vertex& v, std::size_t u, std::size_t progress, double detour) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < v.progress.size(); ++k) {
    const std::size_t p = k == u ? progress : v.progress[k];
    const double d = k == u ? detour : v.detour_soc[k];
    sum += profiles_[k].consumed_at(p) + d;
  }
  return sum;
}

double PlanningProblem::f_with(const Vertex& v, std::size_t u, double detour, double bound) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < v.progress.size(); ++k) {
    const double d = k == u ? detour : v.detour_soc[k];
    const double b = k == u ? bound : v.detour_bound[k];
    sum += (mission_total_[k] + d) + b;
  }
  return sum;
}

double PlanningProblem::post_swap_bound(std::size_t u, std::size_t s, std::size_t w) const {
  return uses_table() ? post_swap_bound_[u][s * tensor_.waypoint_extent() + w] : 0.0;
}

double PlanningProblem::child_bound(const Vertex& v, std::size_t u, std::size_t s, std::size_t w) const {
  const double table = post_swap_bound(u, s, w);
  if (mode_ != HeuristicMode::ScheduleAware || table == kInf) return table;
  const auto& wit = v.bound_witness[u];
  if (!wit || wit->empty() || wit->front().choice.station_index != s || wit->front().choice.waypoint_index != w) {
    return table;
  }
  double rest = 0.0;
  for (std::size_t i = 1; i < wit->size(); ++i) {
    const ActionChoice& a = (*wit)[i].choice;
    rest = rest + 2.0 * tensor_.soc(u, a.station_index, a.waypoint_index);
  }
  return std::max(table, rest);
}

std::pair<double, std::optional<std::vector<PlannedSwap>>> PlanningProblem::schedule_aware_bound(
    const Vertex& v, std::size_t u) const {
  // Best-first search over the replacements of UAV u alone, against the windows
  // and batteries left in `v`. The relaxed table bounds guide it.
  struct Node {
    std::size_t progress;
    double soc;
    double clock;
    double detour;
    double f;
    std::size_t parent;
    PlannedSwap swap;
  };
  struct Entry {
    double f;
    std::uint64_t seq;
    std::size_t node;
    bool operator>(const Entry& o) const { return f != o.f ? f > o.f : seq > o.seq; }
  };
  constexpr std::size_t kPopBudget = 256;
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  const double floor = min_soc();
  const MissionProfile& prof = profiles_[u];
  const PlannerConfig& cfg = scenario_.config;
  const std::size_t n = scenario_.missions[u].size();

  std::vector<Node> nodes;
  nodes.push_back({v.progress[u], v.soc_now[u], v.clock[u], 0.0,
                   detour_lower_bound(u, v.progress[u], v.soc_now[u]), kNone, {}});
  if (nodes[0].f == kInf) return {kInf, std::nullopt};
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t seq = 0;
  open.push({nodes[0].f, seq++, 0});

  std::vector<PlannedSwap> chain;
  for (std::size_t pops = 0; !open.empty(); ++pops) {
    const Entry top = open.top();
    if (pops == kPopBudget) return {top.f, std::nullopt};
    open.pop();
    const Node node = nodes[top.node];
    chain.clear();
    for (std::size_t i = top.node; nodes[i].parent != kNone; i = nodes[i].parent) chain.push_back(nodes[i].swap);
    std::reverse(chain.begin(), chain.end());
    if (node.soc - remaining_soc(u, node.progress) >= floor) return {node.detour, chain};

    for (std::size_t w = node.progress; w < n; ++w) {
      const double at_w = node.soc - prof.leg_soc(node.progress, w);
      if (at_w < floor) break;
      const double depart = node.clock + prof.leg_time(node.progress, w);
      for (std::size_t s : station_order_) {
        if (tensor_.pruned(u, s, w)) continue;
        const double c = tensor_.soc(u, s, w);
        if (at_w - c < floor || 1.0 - c < floor) continue;
        const double after = post_swap_bound(u, s, w);
        if (after == kInf) continue;
        int used = 0;
        for (const PlannedSwap& ps : chain) used += ps.choice.station_index == s ? 1 : 0;
        if (v.charged_counts[s] - used <= 0) continue;
        const Station& station = scenario_.stations[s];
        const double t1 = tensor_.time(u, s, w);
        const double arrival = depart + t1;
        const Window window = blocking_window(arrival, cfg.safety_margin_before, station.replacement_duration,
                                              cfg.safety_margin_after);
        if (!is_free(v.schedules[s], window)) continue;
        const bool clash = std::any_of(chain.begin(), chain.end(), [&](const PlannedSwap& ps) {
          return ps.choice.station_index == s && overlaps(ps.window, window);
        });
        if (clash) continue;
        const double detour = node.detour + 2.0 * c;
        nodes.push_back({w + 1, 1.0 - c, (arrival + station.replacement_duration) + t1, detour,
                         std::max(node.f, detour + after), top.node, PlannedSwap{{s, w}, window}});
        open.push({nodes.back().f, seq++, nodes.size() - 1});
      }
    }
  }
  return {kInf, std::nullopt};
}

bool PlanningProblem::tighten_bounds(Vertex& v) const {
  if (mode_ != HeuristicMode::ScheduleAware) return true;
  for (std::size_t u = 0; u < uav_count(); ++u) {
    if (v.bound_witness[u]) continue;
    if (v.progress[u] >= scenario_.missions[u].size()) {
      v.bound_witness[u] = std::vector<PlannedSwap>{};
      continue;
    }
    auto [bound, witness] = schedule_aware_bound(v, u);
    if (bound == kInf) return false;
    v.detour_bound[u] = std::max(v.detour_bound[u], bound);
    v.bound_witness[u] = std::move(witness);
  }
  return true;
}

double PlanningProblem::priority(const Vertex& v) const { return f_with(v, uav_count(), 0.0, 0.0); }

void PlanningProblem::for_each_move(const Vertex& v, const std::function<void(const Move&)>& visit) const {
  const auto active = active_uav(v);
  if (!active) return;
  const std::size_t u = *active;
  const std::size_t p = v.progress[u];
  const std::size_t n = scenario_.missions[u].size();
  const double soc = v.soc_now[u];
  const double floor = min_soc();

  if (finishable_without_replacement(v, u)) {
    Move m{u, true, 0, n, 0.0, 0.0};
    m.f = f_with(v, u, v.detour_soc[u], 0.0);
    m.g = g_with(v, u, n, v.detour_soc[u]);
    visit(m);
    return;
  }

  const MissionProfile& prof = profiles_[u];
  const PlannerConfig& cfg = scenario_.config;
  for (std::size_t w = p; w < n; ++w) {
    const double at_w = soc - prof.leg_soc(p, w);
    if (at_w < floor) break;
    const double depart = v.clock[u] + prof.leg_time(p, w);
    for (std::size_t s : station_order_) {
      if (tensor_.pruned(u, s, w)) continue;
      const double c = tensor_.soc(u, s, w);
      if (at_w - c < floor || 1.0 - c < floor) continue;
      if (v.charged_counts[s] <= 0) continue;
      const double arrival = depart + tensor_.time(u, s, w);
      const Window window = blocking_window(arrival, cfg.safety_margin_before,
                                            scenario_.stations[s].replacement_duration, cfg.safety_margin_after);
      if (!is_free(v.schedules[s], window)) continue;
      const double bound = child_bound(v, u, s, w);
      if (bound == kInf) continue;
      const double detour = v.detour_soc[u] + 2.0 * c;
      Move m{u, false, s, w, 0.0, 0.0};
      m.f = f_with(v, u, detour, bound);
      m.g = g_with(v, u, w + 1, detour);
      visit(m);
    }
  }
}

Vertex PlanningProblem::apply(const Vertex& v, const Move& move) const {
  Vertex child = v;
  apply_in_place(child, move);
  return child;
}

void PlanningProblem::apply_in_place(Vertex& v, const Move& move) const {
  const std::size_t u = move.uav;
  const std::size_t p = v.progress[u];
  const MissionProfile& prof = profiles_[u];
  if (move.finish) {
    const std::size_t n = scenario_.missions[u].size();
    v.soc_now[u] = v.soc_now[u] - remaining_soc(u, p);
    v.clock[u] = v.clock[u] + (prof.total_time() - prof.elapsed_at(p));
    v.progress[u] = n;
    v.detour_bound[u] = 0.0;
    v.bound_witness[u] = std::vector<PlannedSwap>{};
    v.g = g_with(v, u, n, v.detour_soc[u]);
    return;
  }
  const std::size_t s = move.station_index;
  const std::size_t w = move.waypoint_index;
  const PlannerConfig& cfg = scenario_.config;
  const Station& station = scenario_.stations[s];
  const double t1 = tensor_.time(u, s, w);
  const double c = tensor_.soc(u, s, w);
  const double depart = v.clock[u] + prof.leg_time(p, w);
  const double arrival = depart + t1;
  const double release = arrival + station.replacement_duration;
  const Window window =
      blocking_window(arrival, cfg.safety_margin_before, station.replacement_duration, cfg.safety_margin_after);
  const double detour = v.detour_soc[u] + 2.0 * c;
  v.g = g_with(v, u, w + 1, detour);
  v.detour_bound[u] = child_bound(v, u, s, w);
  v.schedules[s] = reserve(v.schedules[s], window);
  v.charged_counts[s] -= 1;
  v.soc_now[u] = 1.0 - c;
  v.clock[u] = release + t1;
  v.progress[u] = w + 1;
  v.detour_soc[u] = detour;
  if (mode_ == HeuristicMode::ScheduleAware) {
    auto& own = v.bound_witness[u];
    if (own && !own->empty() && own->front().choice.station_index == s && own->front().choice.waypoint_index == w) {
      own->erase(own->begin());
    } else {
      own.reset();
    }
    // Other UAVs keep their witness only if it still fits around the new window.
    for (std::size_t k = 0; k < v.bound_witness.size(); ++k) {
      auto& wit = v.bound_witness[k];
      if (k == u || !wit) continue;
      int at_s = 0;
      bool ok = true;
      for (const PlannedSwap& ps : *wit) {
        if (ps.choice.station_index != s) continue;
        ++at_s;
        if (overlaps(ps.window, window)) ok = false;
      }
      if (!ok || at_s > v.charged_counts[s]) wit.reset();
    }
  }
  v.committed.push_back(ReplacementAction{scenario_.uavs[u].id, station.id, w, depart, arrival, release});
}

std::vector<Vertex> PlanningProblem::expand(const Vertex& v) const {
  std::vector<Vertex> children;
  for_each_move(v, [&](const Move& m) { children.push_back(apply(v, m)); });
  return children;
}

double PlanningProblem::plan_cost(const std::vector<std::vector<ActionChoice>>& per_uav) const {
  double total = 0.0;
  for (std::size_t u = 0; u < uav_count(); ++u) {
    double detour = 0.0;
    if (u < per_uav.size()) {
      for (const ActionChoice& a : per_uav[u]) detour = detour + 2.0 * tensor_.soc(u, a.station_index, a.waypoint_index);
    }
    total += mission_total_[u] + detour;
  }
  return total;
}

Plan PlanningProblem::assemble_plan(const std::vector<std::vector<ActionChoice>>& per_uav) const {
  Plan plan;
  const PlannerConfig& cfg = scenario_.config;
  for (const Station& st : scenario_.stations) plan.schedules.push_back(StationSchedule{st.id, {}});

  for (std::size_t u = 0; u < uav_count(); ++u) {
    const Uav& uav = scenario_.uavs[u];
    const MissionProfile& prof = profiles_[u];
    std::size_t p = scenario_.missions[u].completed_count;
    double soc = uav.initial_soc.value();
    double clock = uav.start_time;
    auto& knots = plan.soc_timelines[uav.id];
    knots.push_back({clock, soc});

    const std::vector<ActionChoice> none;
    for (const ActionChoice& a : u < per_uav.size() ? per_uav[u] : none) {
      const std::size_t s = a.station_index;
      const std::size_t w = a.waypoint_index;
      if (w < p || w >= scenario_.missions[u].size()) {
        throw std::logic_error(fmt::format("UAV {}: action waypoint {} out of order", uav.id, w));
      }
      const Station& station = scenario_.stations[s];
      const double at_w = soc - prof.leg_soc(p, w);
      const double depart = clock + prof.leg_time(p, w);
      const double t1 = tensor_.time(u, s, w);
      const double c = tensor_.soc(u, s, w);
      const double arrival = depart + t1;
      const double at_station = at_w - c;
      const double release = arrival + station.replacement_duration;
      knots.push_back({depart, at_w});
      knots.push_back({arrival, at_station});
      knots.push_back({release, at_station});
      knots.push_back({release, 1.0});
      clock = release + t1;
      soc = 1.0 - c;
      knots.push_back({clock, soc});
      p = w + 1;
      plan.actions.push_back(ReplacementAction{uav.id, station.id, w, depart, arrival, release});
      plan.schedules[s] = reserve(plan.schedules[s], blocking_window(arrival, cfg.safety_margin_before,
                                                                      station.replacement_duration,
                                                                      cfg.safety_margin_after));
    }
    if (p < scenario_.missions[u].size()) {
      soc = soc - remaining_soc(u, p);
      clock = clock + (prof.total_time() - prof.elapsed_at(p));
      knots.push_back({clock, soc});
    }
    plan.makespans[uav.id] = clock;
  }
  std::stable_sort(plan.actions.begin(), plan.actions.end(), [](const auto& a, const auto& b) {
    if (a.arrival_time != b.arrival_time) return a.arrival_time < b.arrival_time;
    if (a.uav_id != b.uav_id) return a.uav_id < b.uav_id;
    return a.waypoint_index < b.waypoint_index;
  });
  plan.total_soc_cost = plan_cost(per_uav);
  return plan;
}

double heuristic(const Vertex& v, std::span<const MissionProfile> profiles) {
  double sum = 0.0;
  for (std::size_t u = 0; u < v.progress.size(); ++u) sum += remaining_soc_to_finish(profiles[u], v.progress[u]);
  return sum;
}

bool finishable_without_replacement(const Vertex& v, std::size_t u, std::span<const MissionProfile> profiles,
                                    double min_soc) {
  return v.soc_now[u] - remaining_soc_to_finish(profiles[u], v.progress[u]) >= min_soc;
}

namespace {

// Search tree node. The vertex is rebuilt on demand by replaying moves from the
// root; only tightened bounds, which depend on search history, are kept.
struct Node {
  std::uint32_t parent;
  std::uint16_t uav;
  std::uint16_t station;
  std::uint32_t waypoint;
  bool finish;
  double expanded_upto;  // children with f at or below this are already queued
  std::unique_ptr<std::pair<std::vector<double>, std::vector<std::optional<std::vector<PlannedSwap>>>>> bounds;
};

class SearchTree {
 public:
  SearchTree(const PlanningProblem& problem, Vertex root) : problem_(problem), root_(std::move(root)) {
    nodes_.push_back(Node{kRoot, 0, 0, 0, false, -kInf, nullptr});
  }

  std::size_t size() const { return nodes_.size(); }
  Node& operator[](std::size_t i) { return nodes_[i]; }

  std::uint32_t add(std::uint32_t parent, const PlanningProblem::Move& m) {
    nodes_.push_back(Node{parent, static_cast<std::uint16_t>(m.uav), static_cast<std::uint16_t>(m.station_index),
                          static_cast<std::uint32_t>(m.waypoint_index), m.finish, -kInf, nullptr});
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  void keep_bounds(std::uint32_t i, const Vertex& v) {
    nodes_[i].bounds = std::make_unique<std::pair<std::vector<double>, std::vector<std::optional<std::vector<PlannedSwap>>>>>(
        v.detour_bound, v.bound_witness);
    ++with_bounds_;
  }

  Vertex vertex(std::uint32_t i) {
    chain_.clear();
    for (std::uint32_t k = i; k != 0; k = nodes_[k].parent) chain_.push_back(k);
    Vertex v = root_;
    for (auto it = chain_.rbegin(); it != chain_.rend(); ++it) {
      const Node& n = nodes_[*it];
      problem_.apply_in_place(v, move_of(n));
      if (n.bounds) {
        v.detour_bound = n.bounds->first;
        v.bound_witness = n.bounds->second;
      }
    }
    return v;
  }

  std::size_t memory_bytes() const {
    return nodes_.capacity() * sizeof(Node) + with_bounds_ * (root_.progress.size() * 96 + 64);
  }

  static PlanningProblem::Move move_of(const Node& n) {
    PlanningProblem::Move m;
    m.uav = n.uav;
    m.finish = n.finish;
    m.station_index = n.station;
    m.waypoint_index = n.waypoint;
    return m;
  }

  static constexpr std::uint32_t kRoot = std::numeric_limits<std::uint32_t>::max();

 private:
  const PlanningProblem& problem_;
  Vertex root_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> chain_;
  std::size_t with_bounds_ = 0;
};

enum class EntryKind : std::uint8_t { Child, Ready, Reopen };

struct OpenEntry {
  double f;
  double g;
  std::uint64_t seq;
  std::uint32_t node;  // parent for Child entries, the vertex itself otherwise
  std::uint16_t uav;
  std::uint16_t station;
  std::uint32_t waypoint;
  bool finish;
  EntryKind kind;
};

// Lowest f first; on ties prefer larger g, then insertion order.
struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.seq > b.seq;
  }
};

struct KeyDigest {
  std::uint64_t a;
  std::uint64_t b;
  bool operator==(const KeyDigest&) const = default;
};

struct KeyDigestHash {
  std::size_t operator()(const KeyDigest& d) const { return static_cast<std::size_t>(d.a ^ (d.b * 0x9e3779b97f4a7c15ULL)); }
};

// Two independent 64-bit hashes of the quantized state key.
KeyDigest digest(const StateKey& key) {
  std::uint64_t a = 0xcbf29ce484222325ULL;
  std::uint64_t b = 0x84222325cbf29ce4ULL;
  for (std::int64_t x : key) {
    const auto y = static_cast<std::uint64_t>(x);
    a = (a ^ y) * 0x100000001b3ULL;
    b ^= y + 0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2);
    b *= 0xff51afd7ed558ccdULL;
  }
  return {a, b};
}

}  // namespace

std::pair<Plan, SearchStats> plan(const Scenario& scenario, const SearchOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - started).count(); };

  const PlanningProblem problem(scenario, options.heuristic);
  SearchStats stats;
  Vertex root = problem.root();
  for (std::size_t u = 0; u < problem.uav_count(); ++u) {
    if (root.detour_bound[u] == kInf) {
      throw Infeasible(fmt::format("UAV {} cannot finish its mission with any sequence of replacements",
                                   scenario.uavs[u].id));
    }
  }
  if (!problem.tighten_bounds(root)) {
    throw Infeasible("the UAVs cannot all finish with the available stations and batteries");
  }
  const double root_f = problem.priority(root);
  const double root_g = root.g;
  SearchTree tree(problem, std::move(root));

  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
  std::unordered_set<KeyDigest, KeyDigestHash> closed;
  std::uint64_t seq = 0;
  open.push(OpenEntry{root_f, root_g, seq++, 0, 0, 0, 0, false, EntryKind::Ready});
  stats.generated = 1;
  stats.peak_open_size = 1;
  const bool keep_bounds = options.heuristic == HeuristicMode::ScheduleAware;
  const std::size_t memory_limit = options.memory_limit_mb * std::size_t{1024} * 1024;

  std::uint64_t pops = 0;
  while (!open.empty()) {
    if (pops++ % 64 == 0) {
      if (elapsed() > options.timeout_s) {
        stats.wall_time = elapsed();
        throw Timeout(fmt::format("search exceeded {} s after {} expansions ({} open)", options.timeout_s,
                                  stats.expanded, open.size()));
      }
      const std::size_t used = tree.memory_bytes() + open.size() * sizeof(OpenEntry) + closed.size() * 48;
      if (used > memory_limit) {
        stats.wall_time = elapsed();
        throw MemoryBudgetExceeded(fmt::format("search exceeded its {} MiB memory budget after {:.1f} s and {} expansions",
                                               options.memory_limit_mb, stats.wall_time, stats.expanded));
      }
    }
    const OpenEntry entry = open.top();
    open.pop();

    std::uint32_t id = entry.node;
    Vertex v;
    if (entry.kind == EntryKind::Child) {
      v = tree.vertex(entry.node);
      const PlanningProblem::Move m{entry.uav, entry.finish, entry.station, entry.waypoint, 0.0, 0.0};
      problem.apply_in_place(v, m);
      if (closed.contains(digest(state_key(v)))) {
        ++stats.duplicates_skipped;
        continue;
      }
      if (!problem.tighten_bounds(v)) continue;
      id = tree.add(entry.node, m);
      if (keep_bounds) tree.keep_bounds(id, v);
      const double f = problem.priority(v);
      if (f > entry.f) {
        open.push(OpenEntry{f, entry.g, seq++, id, 0, 0, 0, false, EntryKind::Ready});
        continue;
      }
    } else {
      v = tree.vertex(id);
    }

    if (entry.kind != EntryKind::Reopen) {
      if (!closed.insert(digest(state_key(v))).second) {
        ++stats.duplicates_skipped;
        continue;
      }
      if (problem.is_goal(v)) {
        std::vector<std::vector<ActionChoice>> per_uav(problem.uav_count());
        for (const ReplacementAction& a : v.committed) {
          const auto u = static_cast<std::size_t>(
              std::find_if(scenario.uavs.begin(), scenario.uavs.end(), [&](const Uav& x) { return x.id == a.uav_id; }) -
              scenario.uavs.begin());
          per_uav[u].push_back({problem.station_index(a.station_id), a.waypoint_index});
        }
        Plan result = problem.assemble_plan(per_uav);
        stats.wall_time = elapsed();
        return {std::move(result), stats};
      }
      if (options.on_expand) options.on_expand(v);
      ++stats.expanded;
    }

    // Partial expansion: queue only the children whose f has been reached and
    // put the vertex back at the smallest f among the rest.
    const double lo = tree[id].expanded_upto;
    double next = kInf;
    problem.for_each_move(v, [&](const PlanningProblem::Move& m) {
      if (m.f <= lo) return;
      if (m.f > entry.f) {
        next = std::min(next, m.f);
        return;
      }
      open.push(OpenEntry{m.f, m.g, seq++, id, static_cast<std::uint16_t>(m.uav),
                          static_cast<std::uint16_t>(m.station_index), static_cast<std::uint32_t>(m.waypoint_index),
                          m.finish, EntryKind::Child});
      ++stats.generated;
    });
    tree[id].expanded_upto = entry.f;
    if (next < kInf) open.push(OpenEntry{next, v.g, seq++, id, 0, 0, 0, false, EntryKind::Reopen});
    stats.peak_open_size = std::max<std::uint64_t>(stats.peak_open_size, open.size());
  }
  stats.wall_time = elapsed();
  throw Infeasible(fmt::format("no replacement plan satisfies the constraints ({} vertices expanded)",
                               stats.expanded));
}

}  // namespace uavswap
