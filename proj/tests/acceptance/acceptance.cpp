// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fmt/format.h>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sys/wait.h>

#include "instances.hpp"
#include "uavswap/actions.hpp"
#include "uavswap/energy.hpp"
#include "uavswap/geo.hpp"
#include "uavswap/plan_io.hpp"
#include "uavswap/planner.hpp"
#include "uavswap/report.hpp"
#include "uavswap/scenario_io.hpp"
#include "uavswap/schedule.hpp"

using namespace uavswap;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures.size() < 5) failures.push_back(what);
  }
};

std::optional<Plan> try_plan(const Scenario& s, SearchOptions o = {}) {
  try {
    return plan(s, o).first;
  } catch (const Infeasible&) {
    return std::nullopt;
  }
}

std::optional<Plan> try_oracle(const Scenario& s) {
  std::size_t longest = 0;
  for (const Mission& m : s.missions) longest = std::max(longest, m.size());
  try {
    return brute_force_plan(s, static_cast<int>(longest));
  } catch (const Infeasible&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Shared full-scale runs (criteria 3, 6, 7).

struct FullRun {
  std::uint64_t seed = 0;
  Scenario scenario;
  Plan plan;
  SearchStats stats;
};

struct FullRuns {
  std::vector<FullRun> solved;
  std::vector<std::uint64_t> infeasible;
  std::vector<std::string> errors;
};

Scenario full_scenario(std::uint64_t seed) {
  RandomScenarioParams p;
  p.config.detour_time_cap = 120.0;
  return generate_random_scenario(seed, p);
}

const FullRuns& full_runs() {
  static const FullRuns runs = [] {
    FullRuns r;
    for (std::uint64_t seed = 0; r.solved.size() < 20 && seed < 60; ++seed) {
      const Scenario s = full_scenario(seed);
      try {
        auto [p, st] = plan(s);
        r.solved.push_back({seed, s, std::move(p), st});
      } catch (const Infeasible&) {
        r.infeasible.push_back(seed);
      } catch (const std::exception& e) {
        r.errors.push_back(fmt::format("seed {}: {}", seed, e.what()));
      }
    }
    return r;
  }();
  return runs;
}

// SoC of a simulated timeline at time t. `left` takes the limit from the left
// at a swap sample, where the value jumps to full.
std::optional<double> timeline_soc(const Timeline& tl, double t, bool left) {
  const auto& s = tl.samples;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(s[i].time - t) <= 1e-9) {
      if (left && s[i].phase == Phase::Swap && i > 0) return s[i - 1].soc;
      return s[i].soc;
    }
    if (s[i].time > t) {
      if (i == 0) return std::nullopt;
      if (s[i].phase == Phase::Swap) return s[i - 1].soc;
      const double a = (t - s[i - 1].time) / (s[i].time - s[i - 1].time);
      return s[i - 1].soc + a * (s[i].soc - s[i - 1].soc);
    }
  }
  return std::nullopt;
}

// Simulator clocks and SoC against the plan's own predictions, to 1e-9.
void check_fidelity(const Scenario& sc, const Plan& p, const std::string& label, Outcome& out, int& compared) {
  std::vector<Timeline> tls;
  try {
    tls = simulate(sc, p);
  } catch (const PlanViolation& e) {
    out.check(false, fmt::format("{}: {}", label, e.what()));
    return;
  }
  for (const Timeline& tl : tls) {
    const auto& knots = p.soc_timelines.at(tl.uav_id);
    for (std::size_t k = 0; k < knots.size(); ++k) {
      const bool left = k + 1 < knots.size() && knots[k + 1].time == knots[k].time;
      const auto v = timeline_soc(tl, knots[k].time, left);
      out.check(v && std::abs(*v - knots[k].soc) <= 1e-9,
                fmt::format("{} UAV {}: knot {} SoC differs", label, tl.uav_id, k));
      ++compared;
    }
    out.check(std::abs(tl.samples.back().time - p.makespans.at(tl.uav_id)) <= 1e-9,
              fmt::format("{} UAV {}: makespan differs", label, tl.uav_id));
    ++compared;
  }
  for (const ReplacementAction& a : p.actions) {
    const Timeline& tl = *std::find_if(tls.begin(), tls.end(), [&](const Timeline& t) { return t.uav_id == a.uav_id; });
    const bool release_seen = std::any_of(tl.samples.begin(), tl.samples.end(), [&](const Sample& x) {
      return x.phase == Phase::Swap && std::abs(x.time - a.release_time) <= 1e-9;
    });
    const bool arrival_seen = std::any_of(tl.samples.begin(), tl.samples.end(), [&](const Sample& x) {
      return x.phase == Phase::DetourOut && std::abs(x.time - a.arrival_time) <= 1e-9;
    });
    out.check(release_seen && arrival_seen, fmt::format("{}: swap samples missing for UAV {}", label, a.uav_id));
    compared += 2;
  }
}

// ---------------------------------------------------------------------------

Outcome criterion_1() {
  Outcome out;
  const auto t0 = Clock::now();
  int feasible = 0, infeasible = 0, over_two = 0;
  for (std::uint64_t seed = 0; feasible < 60 && seed < 400; ++seed) {
    const Scenario s = oracle::micro_instance(seed);
    const auto a = try_plan(s);
    const auto b = try_oracle(s);
    out.check(a.has_value() == b.has_value(), fmt::format("seed {}: feasibility differs", seed));
    if (!a || !b) {
      ++infeasible;
      continue;
    }
    ++feasible;
    out.check(a->total_soc_cost == b->total_soc_cost,
              fmt::format("seed {}: A* {:.17g} vs oracle {:.17g}", seed, a->total_soc_cost, b->total_soc_cost));
    std::map<Id, int> per_uav;
    for (const auto& x : b->actions) ++per_uav[x.uav_id];
    for (const auto& [id, n] : per_uav) over_two += n > 2;
  }
  const double secs = seconds_since(t0);
  out.check(feasible >= 50, fmt::format("only {} feasible instances", feasible));
  out.check(secs < 60.0, fmt::format("suite took {:.1f} s", secs));
  out.detail = fmt::format("{} feasible instances with exactly equal cost, {} infeasible in both engines, {:.1f} s",
                           feasible, infeasible, secs);
  if (over_two) out.detail += fmt::format(", {} UAV plans needed more than 2 swaps", over_two);
  return out;
}

Outcome criterion_2() {
  Outcome out;
  int n = 0;
  auto exact = [&](double got, double want, const char* what) {
    out.check(got == want, fmt::format("{}: {:.17g} != {:.17g}", what, got, want));
    ++n;
  };
  exact(distance({0, 0}, {3, 4}), 5.0, "distance 3-4-5");
  exact(distance({2, 9}, {2, 9}), 0.0, "distance identity");
  exact(distance({1, 2, 3}, {4, 6, 3}), 5.0, "distance 3-D");
  exact(travel_time(10, 5), 2.0, "travel_time 10/5");
  exact(travel_time(0, 3), 0.0, "travel_time 0");
  exact(travel_time(600, 2), 300.0, "travel_time 600/2");
  exact(soc_cost(60, 600), 0.1, "soc_cost 60/600");
  exact(soc_cost(0, 600), 0.0, "soc_cost 0");
  exact(soc_cost(600, 600), 1.0, "soc_cost full");

  Uav u;
  u.speed = 5;
  u.max_flight_time = 600;
  Mission m{0, {{300, 0}, {600, 0}}, 0};
  const MissionProfile p = mission_profile(u, m, 0, Soc(1.0), 0.0, {0, 0});
  exact(p.waypoint_times.at(0), 60.0, "profile time 0");
  exact(p.waypoint_times.at(1), 120.0, "profile time 1");
  out.check(std::abs(p.waypoint_soc.at(0) - 0.9) <= 1e-15 && std::abs(p.waypoint_soc.at(1) - 0.8) <= 1e-15,
            "profile SoC");
  out.check(std::abs(remaining_soc_to_finish(p, 0) - 0.2) <= 1e-15, "remaining SoC 0.2");
  exact(remaining_soc_to_finish(p, 2), 0.0, "remaining SoC at end");
  out.check(mission_profile(u, m, 2, Soc(1.0), 0.0, {600, 0}).waypoint_times.empty(), "empty profile");

  // Derived: single-pass accumulator, two-loop tensor, leg sums, projection.
  double worst = 0.0;
  auto rel = [&](double got, double want) {
    const double e = std::abs(got - want) / std::max(std::abs(want), 1e-300);
    worst = std::max(worst, want == 0.0 ? std::abs(got) : e);
    ++n;
  };
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Scenario s = generate_random_scenario(seed);
    const ActionCostTensor tensor = precompute(s);
    for (std::size_t k = 0; k < s.uavs.size(); ++k) {
      const Uav& uav = s.uavs[k];
      const Mission& mission = s.missions[k];
      const MissionProfile prof =
          mission_profile(uav, mission, 0, uav.initial_soc, uav.start_time, uav.start_position);
      const auto ref = oracle::reference_profile(uav, mission);
      for (std::size_t i = 0; i < ref.times.size(); ++i) {
        rel(prof.waypoint_times[i], ref.times[i]);
        // Consumed SoC: the predicted level itself can sit near zero, where a
        // relative comparison only measures cancellation in start - consumed.
        const double start = uav.initial_soc.value();
        rel(start - prof.waypoint_soc[i], start - ref.soc[i]);
      }
      for (std::size_t from = 0; from <= mission.size(); from += 7) {
        double legs = 0.0;
        for (std::size_t w = from; w < mission.size(); ++w) {
          const LocalPoint& a = w == 0 ? uav.start_position : mission.waypoints[w - 1];
          legs += oracle::reference_distance(a, mission.waypoints[w]) / uav.speed / uav.max_flight_time;
        }
        rel(remaining_soc_to_finish(prof, from), legs);
      }
      for (std::size_t st = 0; st < s.stations.size(); ++st) {
        for (std::size_t w = 0; w < mission.size(); ++w) {
          const double t = oracle::reference_distance(mission.waypoints[w], s.stations[st].position) / uav.speed;
          rel(tensor.time(k, st, w), t);
          rel(tensor.soc(k, st, w), t / uav.max_flight_time);
        }
      }
    }
  }
  const LocalPoint x = to_local_frame(GeoPoint{0.0, 0.001, std::nullopt}, GeoPoint{0.0, 0.0, std::nullopt});
  rel(x.x(), 6371000.0 * std::numbers::pi / 180.0 * 0.001);
  out.check(std::abs(x.x() - 111.19) <= 0.01, "local frame 0.001 deg");

  out.check(worst <= 1e-12, fmt::format("worst relative error {:.3g}", worst));
  out.detail = fmt::format("{} comparisons, worst relative error {:.3g}", n, worst);
  return out;
}

Outcome criterion_3() {
  Outcome out;
  const FullRuns& runs = full_runs();
  for (const auto& e : runs.errors) out.check(false, e);
  out.check(runs.solved.size() == 20, fmt::format("only {} feasible seeds solved", runs.solved.size()));
  double min_soc = 1.0;
  std::size_t max_per_station = 0;
  for (const FullRun& r : runs.solved) {
    const std::string label = fmt::format("seed {}", r.seed);
    std::vector<Timeline> tls;
    try {
      tls = simulate(r.scenario, r.plan);
    } catch (const PlanViolation& e) {
      out.check(false, label + ": " + e.what());
      continue;
    }
    for (const Timeline& t : tls) {
      for (const Sample& x : t.samples) {
        min_soc = std::min(min_soc, x.soc);
        out.check(x.soc >= 0.2, fmt::format("{} UAV {}: SoC {:.6f}", label, t.uav_id, x.soc));
      }
    }
    for (const StationSchedule& sch : r.plan.schedules) {
      for (std::size_t i = 0; i < sch.windows.size(); ++i) {
        for (std::size_t j = i + 1; j < sch.windows.size(); ++j) {
          out.check(!overlaps(sch.windows[i], sch.windows[j]), fmt::format("{}: overlap at {}", label, sch.station_id));
        }
      }
    }
    std::map<Id, std::size_t> per_station;
    for (const auto& a : r.plan.actions) ++per_station[a.station_id];
    for (const auto& [id, n] : per_station) {
      max_per_station = std::max(max_per_station, n);
      out.check(n <= 10, fmt::format("{}: station {} used {} times", label, id, n));
    }
  }
  out.detail = fmt::format("{} seeds solved (6 UAVs, 5 stations, 50 WPs, cap 120 s), {} proved infeasible and skipped {}, "
                           "min SoC {:.4f}, max swaps at one station {}",
                           runs.solved.size(), runs.infeasible.size(), fmt::join(runs.infeasible, ","), min_soc,
                           max_per_station);
  return out;
}

Outcome criterion_4() {
  Outcome out;
  {
    const auto t0 = Clock::now();
    SearchOptions o;
    o.timeout_s = 300;
    try {
      const auto [p, st] = plan(full_scenario(0), o);
      const double secs = seconds_since(t0);
      out.detail = fmt::format("seed 0 capped: {} swaps, {} expansions, {:.1f} s", p.actions.size(), st.expanded, secs);
      out.check(secs < 300, "seed 0 over 5 minutes");
    } catch (const std::exception& e) {
      out.check(false, fmt::format("seed 0 capped: {}", e.what()));
    }
  }

  const fs::path dir = UAVSWAP_FIXTURE_DIR "/park";
  std::vector<fs::path> files;
  for (int i = 1; i <= 7; ++i) files.push_back(dir / fmt::format("uav{}.plan", i));
  Scenario park = import_mission_plans(files, nlohmann::json::parse(read_text_file(dir / "params.json")));
  out.check(park.uavs.size() == 7 && park.stations.size() == 6, "park fixture shape");

  park.config.detour_time_cap = 120.0;
  {
    const auto t0 = Clock::now();
    SearchOptions o;
    o.timeout_s = 300;
    try {
      const auto [p, st] = plan(park, o);
      out.detail += fmt::format("; park capped: {} swaps, {} expansions, {:.1f} s", p.actions.size(), st.expanded,
                                seconds_since(t0));
    } catch (const std::exception& e) {
      out.check(false, fmt::format("park capped: {}", e.what()));
    }
  }
  park.config.detour_time_cap.reset();
  {
    const auto t0 = Clock::now();
    SearchOptions o;
    o.timeout_s = 60;
    try {
      const auto [p, st] = plan(park, o);
      const double secs = seconds_since(t0);
      out.check(false, fmt::format("park uncapped finished in {:.1f} s ({} expansions) instead of timing out", secs,
                                   st.expanded));
      out.detail += fmt::format("; park uncapped: solved, {} expansions, {:.1f} s", st.expanded, secs);
    } catch (const Timeout&) {
      out.detail += fmt::format("; park uncapped: timeout after {:.1f} s", seconds_since(t0));
    } catch (const std::exception& e) {
      out.check(false, fmt::format("park uncapped: {}", e.what()));
    }
  }
  return out;
}

Outcome criterion_5() {
  Outcome out;
  int equal_cases = 0, lower_bound_cases = 0, capped_infeasible = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Scenario open = oracle::micro_instance(seed);
    const auto u = try_plan(open);
    const auto uo = try_oracle(open);
    out.check(u.has_value() == uo.has_value() && (!u || u->total_soc_cost == uo->total_soc_cost),
              fmt::format("seed {}: uncapped A* disagrees with oracle", seed));
    if (!u) continue;
    double longest = 0.0;
    for (const auto& a : u->actions) longest = std::max(longest, a.arrival_time - a.depart_time);
    // A cap just above the optimal detours, and one that cuts into them.
    for (double cap : {longest + 1e-6, longest * 0.6, 40.0}) {
      const Scenario capped = oracle::micro_instance(seed, cap);
      const auto c = try_plan(capped);
      const auto co = try_oracle(capped);
      out.check(c.has_value() == co.has_value() && (!c || c->total_soc_cost == co->total_soc_cost),
                fmt::format("seed {} cap {:.3f}: capped A* disagrees with oracle", seed, cap));
      if (!c) {
        ++capped_infeasible;
        out.check(cap < longest, fmt::format("seed {}: cap above optimal detours but infeasible", seed));
        continue;
      }
      out.check(c->total_soc_cost >= u->total_soc_cost, fmt::format("seed {} cap {:.3f}: capped cheaper", seed, cap));
      ++lower_bound_cases;
      if (cap >= longest) {
        out.check(c->total_soc_cost == u->total_soc_cost,
                  fmt::format("seed {} cap {:.3f}: cost changed although optimal detours fit", seed, cap));
        ++equal_cases;
      }
    }
  }
  out.check(equal_cases >= 50, fmt::format("only {} instances with detours under the cap", equal_cases));
  out.detail = fmt::format("{} capped runs with optimal detours under the cap kept the cost, {} capped runs never "
                           "cheaper, {} capped runs infeasible",
                           equal_cases, lower_bound_cases, capped_infeasible);
  return out;
}

Outcome criterion_6() {
  Outcome out;
  const FullRuns& runs = full_runs();
  out.check(!runs.solved.empty(), "no full-scale plans");
  std::map<int, int> histogram;
  double worst = 0.0, min_ext = 1e18, max_ext = 0.0;
  for (const FullRun& r : runs.solved) {
    const auto summary = summary_json(r.scenario, r.plan);
    for (const auto& u : summary["uavs"]) {
      const Id id = u["uav_id"].get<Id>();
      const int n = u["replacements"].get<int>();
      ++histogram[n];
      out.check(n >= 1 && n <= 3, fmt::format("seed {} UAV {}: {} swaps", r.seed, id, n));
      double expected = 0.0;
      for (const auto& a : r.plan.actions) {
        if (a.uav_id == id) expected += 2.0 * (a.arrival_time - a.depart_time) + (a.release_time - a.arrival_time);
      }
      const double ext = u["extension_s"].get<double>();
      worst = std::max(worst, std::abs(ext - expected));
      min_ext = std::min(min_ext, ext);
      max_ext = std::max(max_ext, ext);
    }
  }
  out.check(worst <= 1e-9, fmt::format("makespan identity off by {:.3g} s", worst));
  std::string hist;
  for (const auto& [n, c] : histogram) hist += fmt::format(" {}:{}", n, c);
  out.detail = fmt::format("swaps per UAV{}, extension {:.0f}..{:.0f} s, identity error {:.3g} s", hist, min_ext,
                           max_ext, worst);
  return out;
}

Outcome criterion_7() {
  Outcome out;
  int plans = 0, compared = 0, mutations = 0;
  auto accept = [&](const Scenario& s, const Plan& p, const std::string& label) {
    check_fidelity(s, p, label, out, compared);
    ++plans;
    if (p.actions.empty()) return;
    for (const auto& m : oracle::violation_corpus(s, p)) {
      ++mutations;
      bool caught = false;
      try {
        simulate(s, m.plan);
      } catch (const PlanViolation&) {
        caught = true;
      }
      out.check(caught, fmt::format("{}: mutation {} not caught", label, m.name));
    }
  };
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const Scenario s = oracle::micro_instance(seed);
    if (const auto p = try_plan(s)) accept(s, *p, fmt::format("micro seed {}", seed));
  }
  for (const FullRun& r : full_runs().solved) accept(r.scenario, r.plan, fmt::format("seed {}", r.seed));
  out.detail = fmt::format("{} plans, {} values within 1e-9, {} corrupted plans all rejected", plans, compared, mutations);
  return out;
}

int run_cli(const std::string& args) {
  const int status = std::system((UAVSWAP_CLI " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion_8() {
  Outcome out;
  int runs = 0;
  for (std::uint64_t seed : {0u, 2u, 5u}) {
    std::optional<std::string> text;
    std::optional<std::uint64_t> expanded;
    for (int rep = 0; rep < 2; ++rep) {
      const Scenario s = load_scenario(save_scenario(full_scenario(seed)));
      try {
        const auto [p, st] = plan(s);
        const std::string t = save_plan(p);
        if (text) {
          out.check(*text == t, fmt::format("seed {}: plan bytes differ", seed));
          out.check(*expanded == st.expanded, fmt::format("seed {}: expanded counts differ", seed));
        }
        text = t;
        expanded = st.expanded;
        ++runs;
      } catch (const Infeasible&) {
      }
    }
  }

  const fs::path dir = fs::temp_directory_path() / "uavswap-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = dir.string();
  int cli_ok = 0;
  for (int rep = 0; rep < 2; ++rep) {
    const std::string sc = fmt::format("{}/s{}.json", d, rep);
    const std::string pl = fmt::format("{}/p{}.json", d, rep);
    cli_ok += run_cli(fmt::format("generate --seed 3 --detour-cap 120 --out {}", sc)) == 0;
    cli_ok += run_cli(fmt::format("plan {} --out {}", sc, pl)) == 0;
    cli_ok += run_cli(fmt::format("report {} {} --out {}/r{}", sc, pl, d, rep)) == 0;
  }
  out.check(cli_ok == 6, "CLI pipeline failed");
  if (cli_ok == 6) {
    for (const char* f : {"s{}.json", "p{}.json", "p{}.stats.json", "r{}/soc.csv", "r{}/summary.json"}) {
      const std::string a = read_text_file(fmt::format("{}/{}", d, fmt::format(fmt::runtime(f), 0)));
      const std::string b = read_text_file(fmt::format("{}/{}", d, fmt::format(fmt::runtime(f), 1)));
      if (std::string_view(f).starts_with("p{}.stats")) {
        const auto ja = nlohmann::json::parse(a), jb = nlohmann::json::parse(b);
        out.check(ja["expanded"] == jb["expanded"], "CLI expanded counts differ");
      } else {
        out.check(a == b, fmt::format("CLI output {} differs", f));
      }
    }
  }
  fs::remove_all(dir);
  out.detail = fmt::format("{} library runs and 2 CLI generate/plan/report runs, plan bytes and expansion counts "
                           "identical",
                           runs);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle optimality", criterion_1},    {"energy model conformance", criterion_2},
      {"constraint safety", criterion_3},    {"full-scale tractability", criterion_4},
      {"pruning soundness", criterion_5},    {"qualitative reproduction", criterion_6},
      {"simulator fidelity", criterion_7},   {"determinism", criterion_8},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    if (!only.empty() && !only.contains(n)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.failures.push_back(fmt::format("unexpected error: {}", e.what()));
    }
    failed += !o.pass;
    fmt::print("criterion {} [{}]: {} ({:.1f} s) {}\n", n, criteria[i].first, o.pass ? "PASS" : "FAIL",
               seconds_since(t0), o.detail);
    for (const auto& f : o.failures) fmt::print("    - {}\n", f);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
