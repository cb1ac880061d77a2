#include "uavswap/scenario_io.hpp"

#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "uavswap/qgc_plan.hpp"

namespace uavswap {

namespace {

using nlohmann::json;

constexpr std::string_view kFormat = "uavswap-scenario";
constexpr int kVersion = 1;

[[noreturn]] void bad(const std::string& field, const std::string& problem) {
  throw ValidationError(fmt::format("{}: {}", field, problem), {field + ": " + problem});
}

double number(const json& obj, const char* key, const std::string& field) {
  const auto it = obj.find(key);
  if (it == obj.end()) bad(field + "." + key, "missing");
  if (!it->is_number()) bad(field + "." + key, "must be a number");
  return it->get<double>();
}

double number_or(const json& obj, const char* key, const std::string& field, double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  if (!it->is_number()) bad(field + "." + key, "must be a number");
  return it->get<double>();
}

int integer(const json& obj, const char* key, const std::string& field) {
  const auto it = obj.find(key);
  if (it == obj.end()) bad(field + "." + key, "missing");
  if (!it->is_number_integer()) bad(field + "." + key, "must be an integer");
  return it->get<int>();
}

GeoPoint parse_geo(const json& j, const std::string& field) {
  GeoPoint g{number(j, "lat", field), number(j, "lon", field), std::nullopt};
  if (j.contains("alt") && !j["alt"].is_null()) g.altitude = number(j, "alt", field);
  try {
    validate(g);
  } catch (const InvalidGeoPoint& e) {
    bad(field, e.what());
  }
  return g;
}

LocalPoint project(const GeoPoint& g, const std::optional<GeoPoint>& origin, const std::string& field) {
  if (!origin) bad(field, "geodetic point in a document without an origin");
  GeoPoint p = g;
  // Ground objects given without altitude sit at the origin's altitude.
  if (!p.altitude && origin->altitude) p.altitude = origin->altitude;
  return to_local_frame(p, *origin);
}

LocalPoint parse_point(const json& j, const std::string& field, const std::optional<GeoPoint>& origin) {
  if (j.is_array()) {
    if (j.size() != 2 && j.size() != 3) bad(field, "local point needs 2 or 3 coordinates");
    for (const auto& c : j) {
      if (!c.is_number()) bad(field, "coordinates must be numbers");
    }
    if (j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  }
  if (!j.is_object()) bad(field, "point must be an object or an array");
  if (j.contains("lat") || j.contains("lon")) return project(parse_geo(j, field), origin, field);
  const double x = number(j, "x", field);
  const double y = number(j, "y", field);
  if (j.contains("z")) return {x, y, number(j, "z", field)};
  return {x, y};
}

json point_to_json(const LocalPoint& p) {
  json j = {{"x", p.x()}, {"y", p.y()}};
  if (p.dim() == 3) j["z"] = p.z();
  return j;
}

Soc soc_field(double value, const std::string& field) {
  if (!(value >= 0.0 && value <= 1.0)) bad(field, fmt::format("{} outside [0, 1]", value));
  return Soc(value);
}

std::vector<Battery> parse_batteries(const json& j, Id station_id, const std::string& field) {
  std::vector<Battery> batteries;
  if (j.is_number_integer()) {
    const int count = j.get<int>();
    if (count < 0) bad(field, "battery count must be >= 0");
    for (int k = 0; k < count; ++k) batteries.push_back(Battery{station_id * 1000 + k + 1, Soc::full()});
    return batteries;
  }
  if (!j.is_array()) bad(field, "must be a list of batteries or a count");
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string f = fmt::format("{}[{}]", field, k);
    if (!j[k].is_object()) bad(f, "battery must be an object");
    batteries.push_back(Battery{integer(j[k], "id", f), soc_field(number_or(j[k], "soc", f, 1.0), f + ".soc")});
  }
  return batteries;
}

Station parse_station(const json& j, const std::string& field, const std::optional<GeoPoint>& origin,
                      const PlannerConfig& config) {
  if (!j.is_object()) bad(field, "station must be an object");
  Station st;
  st.id = integer(j, "id", field);
  if (!j.contains("position")) bad(field + ".position", "missing");
  st.position = parse_point(j["position"], field + ".position", origin);
  st.slots = j.contains("slots") ? integer(j, "slots", field) : 1;
  st.replacement_duration = number_or(j, "replacement_duration_s", field, config.replacement_duration);
  if (j.contains("batteries")) st.batteries = parse_batteries(j["batteries"], st.id, field + ".batteries");
  return st;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json config_to_json(const PlannerConfig& c) {
  return json{
      {"min_soc", c.min_soc.value()},
      {"detour_time_cap_s", c.detour_time_cap ? json(*c.detour_time_cap) : json(nullptr)},
      {"replacement_duration_s", c.replacement_duration},
      {"safety_margin_before_s", c.safety_margin_before},
      {"safety_margin_after_s", c.safety_margin_after},
      {"full_threshold", c.full_threshold.value()},
  };
}

PlannerConfig config_from_json(const json& j, PlannerConfig c) {
  if (j.is_null()) return c;
  if (!j.is_object()) bad("config", "must be an object");
  const std::string f = "config";
  if (j.contains("min_soc")) c.min_soc = soc_field(number(j, "min_soc", f), "config.min_soc");
  if (j.contains("detour_time_cap_s")) {
    if (j["detour_time_cap_s"].is_null()) {
      c.detour_time_cap.reset();
    } else {
      c.detour_time_cap = number(j, "detour_time_cap_s", f);
    }
  }
  c.replacement_duration = number_or(j, "replacement_duration_s", f, c.replacement_duration);
  c.safety_margin_before = number_or(j, "safety_margin_before_s", f, c.safety_margin_before);
  c.safety_margin_after = number_or(j, "safety_margin_after_s", f, c.safety_margin_after);
  if (j.contains("full_threshold")) {
    c.full_threshold = soc_field(number(j, "full_threshold", f), "config.full_threshold");
  }
  validate(c);
  return c;
}

Scenario load_scenario(std::string_view contents, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(contents);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("scenario is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) bad("document", "must be a JSON object");
  if (doc.contains("format") && doc["format"] != kFormat) bad("format", "not a uavswap scenario");
  if (doc.contains("version") && doc["version"] != kVersion) {
    bad("version", fmt::format("unsupported version {}", doc["version"].dump()));
  }

  Scenario s;
  if (doc.contains("origin") && !doc["origin"].is_null()) s.origin = parse_geo(doc["origin"], "origin");
  s.config = config_from_json(doc.value("config", json(nullptr)));

  if (!doc.contains("uavs") || !doc["uavs"].is_array()) bad("uavs", "must be a list");
  const json& uavs = doc["uavs"];
  for (std::size_t i = 0; i < uavs.size(); ++i) {
    const std::string f = fmt::format("uavs[{}]", i);
    const json& ju = uavs[i];
    if (!ju.is_object()) bad(f, "UAV must be an object");
    Uav u;
    u.id = integer(ju, "id", f);
    u.speed = number(ju, "speed_mps", f);
    u.max_flight_time = number(ju, "max_flight_time_s", f);
    u.initial_soc = soc_field(number_or(ju, "initial_soc", f, 1.0), f + ".initial_soc");
    u.start_time = number_or(ju, "start_time_s", f, 0.0);

    Mission m;
    m.uav_id = u.id;
    std::optional<LocalPoint> home;
    if (!ju.contains("mission")) bad(f + ".mission", "missing");
    const json& jm = ju["mission"];
    if (jm.is_string()) {
      const std::filesystem::path plan_path = base_dir / jm.get<std::string>();
      MissionPlanFile plan;
      try {
        plan = parse_mission_plan(read_text_file(plan_path));
      } catch (const ParseError& e) {
        throw ParseError(fmt::format("{}: {}", plan_path.string(), e.what()));
      }
      for (const auto& g : plan.waypoints) m.waypoints.push_back(project(g, s.origin, f + ".mission"));
      home = project(plan.home, s.origin, f + ".mission");
    } else if (jm.is_array()) {
      for (std::size_t w = 0; w < jm.size(); ++w) {
        m.waypoints.push_back(parse_point(jm[w], fmt::format("{}.mission[{}]", f, w), s.origin));
      }
    } else {
      bad(f + ".mission", "must be a waypoint list or a .plan path");
    }
    if (ju.contains("completed_count")) {
      const int c = integer(ju, "completed_count", f);
      if (c < 0) bad(f + ".completed_count", "must be >= 0");
      m.completed_count = static_cast<std::size_t>(c);
    }
    if (ju.contains("start")) {
      u.start_position = parse_point(ju["start"], f + ".start", s.origin);
    } else if (home) {
      u.start_position = *home;
    } else if (!m.waypoints.empty()) {
      u.start_position = m.waypoints.front();
    }
    s.uavs.push_back(u);
    s.missions.push_back(std::move(m));
  }

  if (doc.contains("stations")) {
    const json& stations = doc["stations"];
    if (!stations.is_array()) bad("stations", "must be a list");
    for (std::size_t i = 0; i < stations.size(); ++i) {
      s.stations.push_back(parse_station(stations[i], fmt::format("stations[{}]", i), s.origin, s.config));
    }
  }

  validate(s);
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  return load_scenario(read_text_file(path), path.parent_path());
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  if (s.origin) {
    doc["origin"] = {{"lat", s.origin->latitude}, {"lon", s.origin->longitude}};
    if (s.origin->altitude) doc["origin"]["alt"] = *s.origin->altitude;
  }
  doc["config"] = config_to_json(s.config);
  json uavs = json::array();
  for (std::size_t i = 0; i < s.uavs.size(); ++i) {
    const Uav& u = s.uavs[i];
    json ju = {
        {"id", u.id},
        {"speed_mps", u.speed},
        {"max_flight_time_s", u.max_flight_time},
        {"initial_soc", u.initial_soc.value()},
        {"start", point_to_json(u.start_position)},
        {"start_time_s", u.start_time},
    };
    if (i < s.missions.size()) {
      json wps = json::array();
      for (const auto& p : s.missions[i].waypoints) wps.push_back(point_to_json(p));
      ju["mission"] = std::move(wps);
      ju["completed_count"] = s.missions[i].completed_count;
    }
    uavs.push_back(std::move(ju));
  }
  doc["uavs"] = std::move(uavs);
  json stations = json::array();
  for (const Station& st : s.stations) {
    json bs = json::array();
    for (const Battery& b : st.batteries) bs.push_back({{"id", b.id}, {"soc", b.soc.value()}});
    stations.push_back({
        {"id", st.id},
        {"position", point_to_json(st.position)},
        {"slots", st.slots},
        {"replacement_duration_s", st.replacement_duration},
        {"batteries", std::move(bs)},
    });
  }
  doc["stations"] = std::move(stations);
  return doc;
}

std::string save_scenario(const Scenario& scenario) { return dump(scenario_to_json(scenario)); }

Scenario import_mission_plans(const std::vector<std::filesystem::path>& plan_files, const json& params) {
  if (plan_files.empty()) throw ValidationError("import: no mission plan files given");
  if (!params.is_object()) bad("params", "must be an object");

  std::vector<MissionPlanFile> plans;
  for (const auto& path : plan_files) {
    try {
      plans.push_back(parse_mission_plan(read_text_file(path)));
    } catch (const ParseError& e) {
      // Preserve the concrete error type while naming the file.
      const std::string msg = fmt::format("{}: {}", path.string(), e.what());
      if (dynamic_cast<const NoWaypoints*>(&e)) throw NoWaypoints(msg);
      if (dynamic_cast<const UnsupportedVersion*>(&e)) throw UnsupportedVersion(msg);
      throw ParseError(msg);
    }
  }

  Scenario s;
  s.origin = params.contains("origin") ? parse_geo(params["origin"], "params.origin") : plans.front().home;
  s.config = config_from_json(params.value("config", json(nullptr)));

  const json defaults = params.value("uav", json::object());
  const json overrides = params.value("uavs", json::array());
  if (!overrides.is_array()) bad("params.uavs", "must be a list");
  const int first_id = params.value("first_uav_id", 1);

  for (std::size_t i = 0; i < plans.size(); ++i) {
    json ju = defaults;
    if (i < overrides.size()) ju.update(overrides[i]);
    const std::string f = fmt::format("params.uavs[{}] ({})", i, plan_files[i].filename().string());
    Uav u;
    u.id = ju.contains("id") ? integer(ju, "id", f) : first_id + static_cast<int>(i);
    u.speed = number(ju, "speed_mps", f);
    u.max_flight_time = number(ju, "max_flight_time_s", f);
    u.initial_soc = soc_field(number_or(ju, "initial_soc", f, 1.0), f + ".initial_soc");
    u.start_time = number_or(ju, "start_time_s", f, 0.0);
    u.start_position = project(plans[i].home, s.origin, f);

    Mission m;
    m.uav_id = u.id;
    for (const auto& g : plans[i].waypoints) m.waypoints.push_back(project(g, s.origin, f));
    if (ju.contains("completed_count")) m.completed_count = static_cast<std::size_t>(integer(ju, "completed_count", f));
    s.uavs.push_back(u);
    s.missions.push_back(std::move(m));
  }

  const json stations = params.value("stations", json::array());
  if (!stations.is_array()) bad("params.stations", "must be a list");
  for (std::size_t i = 0; i < stations.size(); ++i) {
    s.stations.push_back(parse_station(stations[i], fmt::format("params.stations[{}]", i), s.origin, s.config));
  }
  validate(s);
  return s;
}

}  // namespace uavswap
