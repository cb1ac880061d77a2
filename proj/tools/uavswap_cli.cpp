// uavswap: generate, import, plan and report battery-replacement missions.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 invalid input, 3 infeasible,
// 4 search time or memory budget exceeded, 5 plan violation.

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "uavswap/errors.hpp"
#include "uavswap/plan_io.hpp"
#include "uavswap/planner.hpp"
#include "uavswap/report.hpp"
#include "uavswap/scenario_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace uavswap;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kInfeasible = 3, kTimeout = 4, kViolation = 5 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

fs::path default_out_dir() {
  const char* env = std::getenv("UAVSWAP_OUT_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

fs::path resolve_out(const std::string& flag, const std::string& default_name) {
  return flag.empty() ? default_out_dir() / default_name : fs::path(flag);
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("error writing {}", path.string()));
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Records what is needed to rerun a command and check its outputs.
class Manifest {
 public:
  Manifest(std::string command, int argc, char** argv) : started_(utc_now()) {
    doc_["command"] = std::move(command);
    doc_["argv"] = std::vector<std::string>(argv, argv + argc);
  }

  json& operator[](const char* key) { return doc_[key]; }

  void output(const fs::path& path, const std::string& contents) {
    doc_["outputs"].push_back({{"path", path.string()}, {"sha256", sha256_hex(contents)}});
  }

  void write(const fs::path& path) {
    doc_["started_utc"] = started_;
    doc_["finished_utc"] = utc_now();
    write_file(path, doc_.dump(2) + "\n");
  }

 private:
  json doc_ = json::object();
  std::string started_;
};

std::string dir_of(const fs::path& out) {
  return out.has_parent_path() ? out.parent_path().string() : std::string(".");
}

fs::path manifest_path(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

fs::path stats_path(const fs::path& plan_out) {
  fs::path p = plan_out;
  p.replace_extension();
  return fs::path(p.string() + ".stats.json");
}

struct ConfigFlags {
  std::optional<double> min_soc;
  std::optional<double> detour_cap;
  bool no_detour_cap = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--min-soc", min_soc, "SoC floor, overrides the scenario config")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--detour-cap", detour_cap, "one-way detour time cap in seconds")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-detour-cap", no_detour_cap, "drop any detour cap from the scenario config");
  }

  json apply(PlannerConfig& cfg) const {
    json overrides = json::object();
    if (min_soc) {
      cfg.min_soc = Soc(*min_soc);
      overrides["min_soc"] = *min_soc;
    }
    if (no_detour_cap) {
      cfg.detour_time_cap.reset();
      overrides["detour_time_cap_s"] = nullptr;
    }
    if (detour_cap) {
      cfg.detour_time_cap = *detour_cap;
      overrides["detour_time_cap_s"] = *detour_cap;
    }
    return overrides;
  }
};

struct GenerateArgs {
  std::uint64_t seed = 0;
  RandomScenarioParams params;
  ConfigFlags config;
  std::string out;
};

int cmd_generate(GenerateArgs& a, int argc, char** argv) {
  Manifest manifest("generate", argc, argv);
  const json overrides = a.config.apply(a.params.config);
  const Scenario scenario = generate_random_scenario(a.seed, a.params);
  const fs::path out = resolve_out(a.out, fmt::format("scenario-{}.json", a.seed));
  const std::string text = save_scenario(scenario);
  write_file(out, text);

  manifest["scenario_source"] = {{"seed", a.seed},
                                 {"uavs", a.params.n_uav},
                                 {"stations", a.params.n_station},
                                 {"batteries", a.params.batteries_per_station},
                                 {"waypoints", a.params.waypoints_per_mission}};
  manifest["config_overrides"] = overrides;
  manifest["output_dir"] = dir_of(out);
  manifest.output(out, text);
  manifest.write(manifest_path(out));
  std::cout << out.string() << "\n";
  return kOk;
}

struct ImportArgs {
  std::vector<std::string> plan_files;
  std::string params_file;
  std::optional<double> speed;
  std::optional<double> flight_time;
  std::optional<double> initial_soc;
  ConfigFlags config;
  std::string out;
};

int cmd_import(ImportArgs& a, int argc, char** argv) {
  Manifest manifest("import", argc, argv);
  json params = json::object();
  if (!a.params_file.empty()) {
    try {
      params = json::parse(read_text_file(a.params_file));
    } catch (const json::parse_error& e) {
      throw ParseError(fmt::format("{}: {}", a.params_file, e.what()));
    }
  }
  if (a.speed) params["uav"]["speed_mps"] = *a.speed;
  if (a.flight_time) params["uav"]["max_flight_time_s"] = *a.flight_time;
  if (a.initial_soc) params["uav"]["initial_soc"] = *a.initial_soc;

  std::vector<fs::path> files(a.plan_files.begin(), a.plan_files.end());
  Scenario scenario = import_mission_plans(files, params);
  const json overrides = a.config.apply(scenario.config);
  validate(scenario);

  const fs::path out = resolve_out(a.out, "scenario.json");
  const std::string text = save_scenario(scenario);
  write_file(out, text);

  json sources = json::array();
  for (const auto& f : a.plan_files) sources.push_back({{"path", f}, {"sha256", sha256_hex(read_text_file(f))}});
  manifest["scenario_source"] = {{"plan_files", sources}, {"params", a.params_file}};
  manifest["config_overrides"] = overrides;
  manifest["output_dir"] = dir_of(out);
  manifest.output(out, text);
  manifest.write(manifest_path(out));
  std::cout << out.string() << "\n";
  return kOk;
}

struct PlanArgs {
  std::string scenario;
  ConfigFlags config;
  double timeout = 600.0;
  std::size_t memory_limit_mb = 2048;
  HeuristicMode heuristic = HeuristicMode::ScheduleAware;
  std::string out;
};

int cmd_plan(PlanArgs& a, int argc, char** argv) {
  Manifest manifest("plan", argc, argv);
  const std::string source = read_text_file(a.scenario);
  Scenario scenario = load_scenario(source, fs::path(a.scenario).parent_path());
  const json overrides = a.config.apply(scenario.config);
  validate(scenario.config);

  manifest["scenario_source"] = {{"path", a.scenario}, {"sha256", sha256_hex(source)}};
  manifest["config_overrides"] = overrides;

  SearchOptions options;
  options.timeout_s = a.timeout;
  options.memory_limit_mb = a.memory_limit_mb;
  options.heuristic = a.heuristic;
  const auto [plan, stats] = uavswap::plan(scenario, options);

  const fs::path out = resolve_out(a.out, "plan.json");
  const std::string text = save_plan(plan);
  const std::string stats_text = stats_to_json(stats).dump(2) + "\n";
  write_file(out, text);
  write_file(stats_path(out), stats_text);
  manifest["output_dir"] = dir_of(out);
  manifest.output(out, text);
  manifest.output(stats_path(out), stats_text);
  manifest.write(manifest_path(out));

  std::cout << fmt::format("{} replacements, total SoC {:.6f}, {} vertices expanded\n", plan.actions.size(),
                           plan.total_soc_cost, stats.expanded);
  return kOk;
}

struct ReportArgs {
  std::string scenario;
  std::string plan;
  std::string out;
};

int cmd_report(ReportArgs& a) {
  const Scenario scenario = load_scenario_file(a.scenario);
  const Plan plan = load_plan(read_text_file(a.plan));
  const std::vector<Timeline> timelines = simulate(scenario, plan);

  const fs::path dir = a.out.empty() ? default_out_dir() / "report" : fs::path(a.out);
  write_file(dir / "actions.txt", action_table(plan));
  write_file(dir / "schedule.txt", schedule_table(plan));
  write_file(dir / "soc.csv", soc_csv(timelines));
  write_file(dir / "summary.json", summary_json(scenario, plan).dump(2) + "\n");
  std::cout << action_table(plan) << "\n" << schedule_table(plan);
  return kOk;
}

int fail(int code, const std::string& what) {
  std::cerr << "uavswap: error: " << what << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Battery-replacement mission planner for UAV fleets"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "write a random ellipse-mission scenario");
  g->add_option("--seed", gen.seed, "generator seed");
  g->add_option("--uavs", gen.params.n_uav, "number of UAVs");
  g->add_option("--stations", gen.params.n_station, "number of stations");
  g->add_option("--batteries", gen.params.batteries_per_station, "charged batteries per station");
  g->add_option("--waypoints", gen.params.waypoints_per_mission, "waypoints per mission");
  gen.config.add_to(g);
  g->add_option("--out", gen.out, "scenario file (default $UAVSWAP_OUT_DIR/scenario-<seed>.json)");

  ImportArgs imp;
  auto* i = app.add_subcommand("import", "build a scenario from QGroundControl .plan files");
  i->add_option("plans", imp.plan_files, "mission files, one per UAV")->required()->check(CLI::ExistingFile);
  i->add_option("--params", imp.params_file, "JSON with uav defaults, per-UAV overrides, stations and config")
      ->check(CLI::ExistingFile);
  i->add_option("--speed", imp.speed, "default UAV speed, m/s");
  i->add_option("--flight-time", imp.flight_time, "default full-battery flight time, s");
  i->add_option("--initial-soc", imp.initial_soc, "default initial SoC");
  imp.config.add_to(i);
  i->add_option("--out", imp.out, "scenario file (default $UAVSWAP_OUT_DIR/scenario.json)");

  PlanArgs pl;
  auto* p = app.add_subcommand("plan", "search for the minimum-SoC replacement plan");
  p->add_option("scenario", pl.scenario, "scenario file")->required()->check(CLI::ExistingFile);
  pl.config.add_to(p);
  p->add_option("--timeout", pl.timeout, "search budget in seconds")->check(CLI::PositiveNumber);
  p->add_option("--memory-limit", pl.memory_limit_mb, "search memory budget in MiB")->check(CLI::PositiveNumber);
  const std::map<std::string, HeuristicMode> modes{{"schedule", HeuristicMode::ScheduleAware},
                                                   {"relaxed", HeuristicMode::RelaxedDetour},
                                                   {"mission", HeuristicMode::MissionOnly}};
  p->add_option("--heuristic", pl.heuristic, "schedule (default), relaxed or mission")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  p->add_option("--out", pl.out, "plan file (default $UAVSWAP_OUT_DIR/plan.json)");

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "validate a plan and write tables, SoC CSV and summary");
  r->add_option("scenario", rep.scenario, "scenario file")->required()->check(CLI::ExistingFile);
  r->add_option("plan", rep.plan, "plan file")->required()->check(CLI::ExistingFile);
  r->add_option("--out", rep.out, "output directory (default $UAVSWAP_OUT_DIR/report)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return cmd_generate(gen, argc, argv);
    if (*i) return cmd_import(imp, argc, argv);
    if (*p) return cmd_plan(pl, argc, argv);
    return cmd_report(rep);
  } catch (const PlanViolation& e) {
    return fail(kViolation, fmt::format("plan violation: {}", e.what()));
  } catch (const Infeasible& e) {
    return fail(kInfeasible, fmt::format("infeasible: {}", e.what()));
  } catch (const SearchBudgetExceeded& e) {
    return fail(kTimeout, fmt::format("timeout: {}", e.what()));
  } catch (const ValidationError& e) {
    return fail(kInvalid, e.what());
  } catch (const ParseError& e) {
    return fail(kInvalid, e.what());
  } catch (const ModelViolation& e) {
    return fail(kInvalid, e.what());
  } catch (const IoError& e) {
    return fail(kUsage, e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(kUsage, e.what());
  } catch (const std::exception& e) {
    return fail(kUsage, e.what());
  }
}
