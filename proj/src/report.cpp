#include "uavswap/report.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <map>
#include <sstream>

#include "uavswap/energy.hpp"
#include "uavswap/errors.hpp"
#include "uavswap/schedule.hpp"

namespace uavswap {

namespace {

constexpr double kTolerance = 1e-9;

template <typename... Args>
[[noreturn]] void violation(fmt::format_string<Args...> f, Args&&... args) {
  throw PlanViolation(fmt::format(f, std::forward<Args>(args)...));
}

bool close(double a, double b) { return std::abs(a - b) <= kTolerance; }

class TimelineBuilder {
 public:
  explicit TimelineBuilder(Id id) { timeline_.uav_id = id; }

  void add(double time, double soc, const LocalPoint& where, Phase phase) {
    auto& s = timeline_.samples;
    if (!s.empty() && time < s.back().time) {
      violation("UAV {}: timeline goes back in time at {:.3f} s", timeline_.uav_id, time);
    }
    // Zero-length legs collapse onto the later event.
    if (!s.empty() && time == s.back().time) s.pop_back();
    s.push_back(Sample{time, soc, where, phase});
  }

  Timeline take() { return std::move(timeline_); }

 private:
  Timeline timeline_;
};

}  // namespace

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Leg: return "leg";
    case Phase::DetourOut: return "detour_out";
    case Phase::Swap: return "swap";
    case Phase::DetourBack: return "detour_back";
    case Phase::Done: return "done";
  }
  return "?";
}

Phase phase_from_string(std::string_view name) {
  for (Phase p : {Phase::Leg, Phase::DetourOut, Phase::Swap, Phase::DetourBack, Phase::Done}) {
    if (to_string(p) == name) return p;
  }
  throw ParseError(fmt::format("unknown phase '{}'", name));
}

std::vector<Timeline> simulate(const Scenario& scenario, const Plan& plan) {
  const PlannerConfig& cfg = scenario.config;
  const double floor = cfg.min_soc.value();

  std::map<Id, std::size_t> uav_index;
  std::map<Id, std::size_t> station_index;
  for (std::size_t u = 0; u < scenario.uavs.size(); ++u) uav_index[scenario.uavs[u].id] = u;
  for (std::size_t s = 0; s < scenario.stations.size(); ++s) station_index[scenario.stations[s].id] = s;

  std::vector<std::vector<const ReplacementAction*>> per_uav(scenario.uavs.size());
  std::vector<std::vector<Window>> windows(scenario.stations.size());
  for (const ReplacementAction& a : plan.actions) {
    const auto u = uav_index.find(a.uav_id);
    if (u == uav_index.end()) violation("action for unknown UAV {}", a.uav_id);
    if (!station_index.contains(a.station_id)) violation("action at unknown station {}", a.station_id);
    per_uav[u->second].push_back(&a);
  }

  double total = 0.0;
  std::vector<Timeline> out;
  for (std::size_t u = 0; u < scenario.uavs.size(); ++u) {
    const Uav& uav = scenario.uavs[u];
    const Mission& mission = scenario.missions[u];
    const MissionProfile prof = mission_profile(uav, mission, mission.completed_count, uav.initial_soc,
                                                uav.start_time, uav.start_position);
    auto& acts = per_uav[u];
    std::stable_sort(acts.begin(), acts.end(),
                     [](const auto* a, const auto* b) { return a->waypoint_index < b->waypoint_index; });

    TimelineBuilder tl(uav.id);
    std::vector<SocKnot> knots;
    std::size_t p = mission.completed_count;
    double soc = uav.initial_soc.value();
    double clock = uav.start_time;
    double detour = 0.0;
    tl.add(clock, soc, uav.start_position, p < mission.size() ? Phase::Leg : Phase::Done);
    knots.push_back({clock, soc});

    // Mission legs from the progress point up to waypoint `last`, sampling each waypoint.
    const auto fly_to = [&](std::size_t last) {
      const double base_soc = soc;
      const double base_clock = clock;
      for (std::size_t w = p; w <= last; ++w) {
        const double s_w = base_soc - prof.leg_soc(p, w);
        if (s_w < floor) violation("UAV {}: SoC {:.6f} below floor at waypoint {}", uav.id, s_w, w);
        const Phase phase = w + 1 == mission.size() ? Phase::Done : Phase::Leg;
        tl.add(base_clock + prof.leg_time(p, w), s_w, mission.waypoints[w], phase);
      }
      soc = base_soc - prof.leg_soc(p, last);
      clock = base_clock + prof.leg_time(p, last);
    };

    for (const ReplacementAction* a : acts) {
      const std::size_t w = a->waypoint_index;
      if (w < p || w >= mission.size()) {
        violation("UAV {}: replacement at waypoint {} outside the remaining mission", uav.id, w);
      }
      const std::size_t s = station_index.at(a->station_id);
      const Station& station = scenario.stations[s];
      const double t1 = travel_time(distance(mission.waypoints[w], station.position), uav.speed);
      const double c = soc_cost(t1, uav.max_flight_time);
      if (cfg.detour_time_cap && t1 > *cfg.detour_time_cap) {
        violation("UAV {}: detour to station {} takes {:.3f} s, over the cap", uav.id, station.id, t1);
      }

      fly_to(w);
      const double depart = clock;
      const double at_w = soc;
      const double arrival = depart + t1;
      const double at_station = at_w - c;
      const double release = arrival + station.replacement_duration;
      if (at_station < floor) {
        violation("UAV {}: SoC {:.6f} below floor on arrival at station {}", uav.id, at_station, station.id);
      }
      if (1.0 - c < floor) violation("UAV {}: return leg from station {} breaches the floor", uav.id, station.id);
      if (!close(depart, a->depart_time) || !close(arrival, a->arrival_time) || !close(release, a->release_time)) {
        violation("UAV {} waypoint {}: planned times {:.6f}/{:.6f}/{:.6f} differ from replay {:.6f}/{:.6f}/{:.6f}",
                  uav.id, w, a->depart_time, a->arrival_time, a->release_time, depart, arrival, release);
      }
      windows[s].push_back(
          blocking_window(arrival, cfg.safety_margin_before, station.replacement_duration, cfg.safety_margin_after));

      tl.add(arrival, at_station, station.position, Phase::DetourOut);
      tl.add(release, 1.0, station.position, Phase::Swap);
      clock = release + t1;
      soc = 1.0 - c;
      detour = detour + 2.0 * c;
      p = w + 1;
      tl.add(clock, soc, mission.waypoints[w], p == mission.size() ? Phase::Done : Phase::DetourBack);
      knots.push_back({depart, at_w});
      knots.push_back({arrival, at_station});
      knots.push_back({release, at_station});
      knots.push_back({release, 1.0});
      knots.push_back({clock, soc});
    }
    if (p < mission.size()) {
      fly_to(mission.size() - 1);
      knots.push_back({clock, soc});
    }
    if (soc < floor) violation("UAV {}: ends its mission at SoC {:.6f}, below the floor", uav.id, soc);

    const auto ms = plan.makespans.find(uav.id);
    if (ms == plan.makespans.end() || !close(ms->second, clock)) {
      violation("UAV {}: makespan differs from replay ({:.6f} s)", uav.id, clock);
    }
    const auto planned = plan.soc_timelines.find(uav.id);
    if (planned == plan.soc_timelines.end()) violation("UAV {}: plan has no SoC timeline", uav.id);
    const auto& pk = planned->second;
    if (pk.size() != knots.size()) violation("UAV {}: SoC timeline has {} knots, replay {}", uav.id, pk.size(), knots.size());
    for (std::size_t k = 0; k < pk.size(); ++k) {
      if (!close(pk[k].time, knots[k].time) || !close(pk[k].soc, knots[k].soc)) {
        violation("UAV {}: SoC timeline knot {} differs from replay", uav.id, k);
      }
    }
    total += prof.total_soc() + detour;
    out.push_back(tl.take());
  }

  for (std::size_t s = 0; s < scenario.stations.size(); ++s) {
    const Station& station = scenario.stations[s];
    const auto used = static_cast<int>(windows[s].size());
    const int available = charged_battery_count(station, cfg.full_threshold);
    if (used > available) {
      violation("station {}: {} replacements but only {} charged batteries", station.id, used, available);
    }
    auto& ws = windows[s];
    std::sort(ws.begin(), ws.end(), [](const Window& a, const Window& b) { return a.start < b.start; });
    for (std::size_t i = 1; i < ws.size(); ++i) {
      if (overlaps(ws[i - 1], ws[i])) violation("station {}: overlapping blocking windows", station.id);
    }
    const auto sched = std::find_if(plan.schedules.begin(), plan.schedules.end(),
                                    [&](const StationSchedule& x) { return x.station_id == station.id; });
    const std::vector<Window> none;
    const auto& planned = sched == plan.schedules.end() ? none : sched->windows;
    if (planned.size() != ws.size()) violation("station {}: schedule lists {} windows, replay {}", station.id, planned.size(), ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (!close(planned[i].start, ws[i].start) || !close(planned[i].end, ws[i].end)) {
        violation("station {}: schedule window {} differs from replay", station.id, i);
      }
    }
  }
  for (const StationSchedule& sched : plan.schedules) {
    if (!station_index.contains(sched.station_id)) violation("schedule for unknown station {}", sched.station_id);
  }
  if (!close(total, plan.total_soc_cost)) {
    violation("total SoC cost {:.12f} differs from replay {:.12f}", plan.total_soc_cost, total);
  }
  return out;
}

std::string format_clock(double seconds) {
  const long long cs = std::llround(std::abs(seconds) * 100.0);
  return fmt::format("{}{}:{:02}.{:02}", seconds < 0 && cs > 0 ? "-" : "", cs / 6000, (cs % 6000) / 100, cs % 100);
}

std::string action_table(const Plan& plan, TableFormat format) {
  std::vector<ReplacementAction> rows = plan.actions;
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.uav_id != b.uav_id ? a.uav_id < b.uav_id : a.waypoint_index < b.waypoint_index;
  });
  std::string out;
  if (format == TableFormat::Csv) {
    out = "uav_id,station_id,waypoint_index\n";
    for (const auto& a : rows) out += fmt::format("{},{},{}\n", a.uav_id, a.station_id, a.waypoint_index);
    return out;
  }
  out = fmt::format("{:>6}  {:>10}  {:>8}\n", "UAV ID", "Station ID", "WP Index");
  for (const auto& a : rows) out += fmt::format("{:>6}  {:>10}  {:>8}\n", a.uav_id, a.station_id, a.waypoint_index);
  return out;
}

std::string schedule_table(const Plan& plan, TableFormat format) {
  struct Row {
    Id station;
    Window window;
  };
  std::vector<Row> rows;
  for (const StationSchedule& s : plan.schedules) {
    for (const Window& w : s.windows) rows.push_back({s.station_id, w});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.station != b.station ? a.station < b.station : a.window.start < b.window.start;
  });
  std::string out;
  if (format == TableFormat::Csv) {
    out = "station_id,start_s,end_s\n";
    for (const Row& r : rows) out += fmt::format("{},{:.17g},{:.17g}\n", r.station, r.window.start, r.window.end);
    return out;
  }
  out = fmt::format("{:>10}  {:>9}  {:>9}\n", "Station ID", "Start", "End");
  for (const Row& r : rows) {
    out += fmt::format("{:>10}  {:>9}  {:>9}\n", r.station, format_clock(r.window.start), format_clock(r.window.end));
  }
  return out;
}

std::string soc_csv(const std::vector<Timeline>& timelines) {
  std::string out = "time_s,uav_id,soc,phase\n";
  for (const Timeline& t : timelines) {
    for (const Sample& s : t.samples) {
      out += fmt::format("{:.17g},{},{:.17g},{}\n", s.time, t.uav_id, s.soc, to_string(s.phase));
    }
  }
  return out;
}

std::vector<SocCsvRow> parse_soc_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "time_s,uav_id,soc,phase") throw ParseError("SoC CSV: bad header");
  std::vector<SocCsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream fields(line);
    for (std::string cell; std::getline(fields, cell, ',');) cells.push_back(cell);
    if (cells.size() != 4) throw ParseError(fmt::format("SoC CSV line {}: expected 4 fields", lineno));
    try {
      std::size_t used = 0;
      SocCsvRow row;
      row.time = std::stod(cells[0], &used);
      if (used != cells[0].size()) throw std::invalid_argument("time");
      row.uav_id = std::stoi(cells[1], &used);
      if (used != cells[1].size()) throw std::invalid_argument("uav_id");
      row.soc = std::stod(cells[2], &used);
      if (used != cells[2].size()) throw std::invalid_argument("soc");
      row.phase = phase_from_string(cells[3]);
      rows.push_back(row);
    } catch (const std::logic_error&) {
      throw ParseError(fmt::format("SoC CSV line {}: malformed number", lineno));
    }
  }
  return rows;
}

nlohmann::json summary_json(const Scenario& scenario, const Plan& plan) {
  using nlohmann::json;
  std::map<Id, int> per_station;
  std::map<Id, int> per_uav;
  for (const Station& s : scenario.stations) per_station[s.id] = 0;
  for (const Uav& u : scenario.uavs) per_uav[u.id] = 0;
  for (const ReplacementAction& a : plan.actions) {
    ++per_station[a.station_id];
    ++per_uav[a.uav_id];
  }

  json uavs = json::array();
  for (std::size_t u = 0; u < scenario.uavs.size(); ++u) {
    const Uav& uav = scenario.uavs[u];
    const Mission& m = scenario.missions[u];
    const MissionProfile prof =
        mission_profile(uav, m, m.completed_count, uav.initial_soc, uav.start_time, uav.start_position);
    const double base = uav.start_time + prof.total_time();
    const auto it = plan.makespans.find(uav.id);
    const double makespan = it == plan.makespans.end() ? base : it->second;
    uavs.push_back({{"uav_id", uav.id},
                    {"replacements", per_uav[uav.id]},
                    {"mission_end_without_detours_s", base},
                    {"makespan_s", makespan},
                    {"extension_s", makespan - base},
                    {"makespan", format_clock(makespan)}});
  }
  json stations = json::array();
  for (const auto& [id, n] : per_station) stations.push_back({{"station_id", id}, {"replacements", n}});

  return {{"total_soc_cost", plan.total_soc_cost},
          {"replacements", plan.actions.size()},
          {"uavs", std::move(uavs)},
          {"replacements_per_station", std::move(stations)}};
}

}  // namespace uavswap
