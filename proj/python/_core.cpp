#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uavswap/energy.hpp"
#include "uavswap/plan_io.hpp"
#include "uavswap/planner.hpp"
#include "uavswap/report.hpp"
#include "uavswap/scenario.hpp"
#include "uavswap/scenario_io.hpp"

namespace py = pybind11;
using namespace uavswap;

namespace {

LocalPoint to_point(const std::vector<double>& c) {
  if (c.size() == 2) return {c[0], c[1]};
  if (c.size() == 3) return {c[0], c[1], c[2]};
  throw ValidationError("a point needs 2 or 3 coordinates");
}

HeuristicMode heuristic_from(const std::string& name) {
  if (name == "schedule") return HeuristicMode::ScheduleAware;
  if (name == "relaxed") return HeuristicMode::RelaxedDetour;
  if (name == "mission") return HeuristicMode::MissionOnly;
  throw ValidationError("heuristic must be one of schedule, relaxed, mission");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Battery-replacement planning for UAV fleets";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ValidationError>(m, "ValidationError", error);
  py::register_exception<ParseError>(m, "ParseError", error);
  py::register_exception<Infeasible>(m, "Infeasible", error);
  auto budget = py::register_exception<SearchBudgetExceeded>(m, "SearchBudgetExceeded", error);
  py::register_exception<Timeout>(m, "Timeout", budget);
  py::register_exception<MemoryBudgetExceeded>(m, "MemoryBudgetExceeded", budget);
  py::register_exception<PlanViolation>(m, "PlanViolation", error);

  m.def(
      "distance",
      [](const std::vector<double>& a, const std::vector<double>& b) { return distance(to_point(a), to_point(b)); },
      py::arg("p1"), py::arg("p2"));
  m.def("travel_time", &travel_time, py::arg("d"), py::arg("speed"));
  m.def("soc_cost", &soc_cost, py::arg("delta_t"), py::arg("max_flight_time"));
  m.def("format_clock", &format_clock, py::arg("seconds"));

  m.def(
      "generate_scenario",
      [](std::uint64_t seed, int uavs, int stations, int batteries, int waypoints, std::optional<double> detour_cap) {
        RandomScenarioParams p;
        p.n_uav = uavs;
        p.n_station = stations;
        p.batteries_per_station = batteries;
        p.waypoints_per_mission = waypoints;
        p.config.detour_time_cap = detour_cap;
        return save_scenario(generate_random_scenario(seed, p));
      },
      py::arg("seed"), py::arg("uavs") = 6, py::arg("stations") = 5, py::arg("batteries") = 10,
      py::arg("waypoints") = 50, py::arg("detour_cap") = py::none(),
      "Random ellipse-mission scenario as a JSON document.");

  m.def(
      "plan",
      [](const std::string& scenario_json, double timeout, const std::string& heuristic) {
        const Scenario s = load_scenario(scenario_json);
        SearchOptions o;
        o.timeout_s = timeout;
        o.heuristic = heuristic_from(heuristic);
        std::pair<Plan, SearchStats> result;
        {
          py::gil_scoped_release release;
          result = uavswap::plan(s, o);
        }
        return py::make_tuple(save_plan(result.first), stats_to_json(result.second).dump());
      },
      py::arg("scenario_json"), py::arg("timeout") = 600.0, py::arg("heuristic") = "schedule",
      "Returns (plan JSON, search stats JSON).");

  m.def(
      "report",
      [](const std::string& scenario_json, const std::string& plan_json) {
        const Scenario s = load_scenario(scenario_json);
        const Plan p = load_plan(plan_json);
        const auto timelines = simulate(s, p);
        py::dict out;
        out["actions"] = action_table(p);
        out["schedule"] = schedule_table(p);
        out["soc_csv"] = soc_csv(timelines);
        out["summary"] = summary_json(s, p).dump();
        return out;
      },
      py::arg("scenario_json"), py::arg("plan_json"),
      "Validates the plan by replay and returns tables, SoC CSV and summary JSON.");
}
