#include "rosa/sim/io.hpp"

#include <fstream>
#include <sstream>

#include "rosa/data/series_io.hpp"
#include "rosa/error.hpp"

namespace rosa {

namespace fs = std::filesystem;

nlohmann::json to_json(const TrafficSpec& spec) {
  nlohmann::json flows = nlohmann::json::array();
  for (const auto& f : spec.flows) flows.push_back({{"arm", f.arm}, {"vehicles_per_minute", f.vehicles_per_minute}});
  nlohmann::json crossings = nlohmann::json::array();
  for (const auto& c : spec.crossings)
    crossings.push_back({{"zone", c.zone_id}, {"start", c.start}, {"duration", c.duration}, {"direction", c.direction}});
  nlohmann::json vehicles = nlohmann::json::array();
  for (const auto& v : spec.vehicles)
    vehicles.push_back({{"entry_arm", v.entry_arm}, {"exit_arm", v.exit_arm}, {"spawn_time", v.spawn_time}, {"speed", v.speed}});
  return {{"duration", spec.duration},
          {"circulating_speed", spec.circulating_speed},
          {"speed_jitter", spec.speed_jitter},
          {"spawn_radial", spec.spawn_radial},
          {"warmup", spec.warmup},
          {"vru_lead_in", spec.vru_lead_in},
          {"flows", flows},
          {"crossings", crossings},
          {"vehicles", vehicles}};
}

TrafficSpec traffic_spec_from_json(const nlohmann::json& j) {
  TrafficSpec s;
  try {
    s.duration = j.value("duration", s.duration);
    s.circulating_speed = j.value("circulating_speed", s.circulating_speed);
    s.speed_jitter = j.value("speed_jitter", s.speed_jitter);
    s.spawn_radial = j.value("spawn_radial", s.spawn_radial);
    s.warmup = j.value("warmup", s.warmup);
    s.vru_lead_in = j.value("vru_lead_in", s.vru_lead_in);
    for (const auto& f : j.value("flows", nlohmann::json::array()))
      s.flows.push_back({f.at("arm").get<int>(), f.at("vehicles_per_minute").get<double>()});
    for (const auto& c : j.value("crossings", nlohmann::json::array()))
      s.crossings.push_back({c.at("zone").get<int>(), c.at("start").get<std::int64_t>(),
                             c.value("duration", 4), c.value("direction", 1)});
    for (const auto& v : j.value("vehicles", nlohmann::json::array()))
      s.vehicles.push_back({v.at("entry_arm").get<int>(), v.at("exit_arm").get<int>(),
                            v.at("spawn_time").get<double>(), v.value("speed", 8.0)});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("traffic spec: ") + e.what());
  }
  return s;
}

ScenarioSpec scenario_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  ScenarioSpec spec;
  try {
    spec.id = j.at("id").get<std::string>();
    if (j.contains("geometry") && !j.at("geometry").is_null())
      spec.geometry = std::make_shared<RoundaboutGeometry>(load_geometry(base_dir / j.at("geometry").get<std::string>()));
    else
      spec.geometry = std::make_shared<RoundaboutGeometry>(default_geometry());
    const auto& bg = j.at("background");
    if (bg.contains("file")) {
      spec.background = std::make_shared<FrameSeries>(load_series(base_dir / bg.at("file").get<std::string>()));
    } else {
      const TrafficSpec traffic = traffic_spec_from_json(bg.at("synthetic"));
      spec.background = std::make_shared<FrameSeries>(
          generate_synthetic_scenario(*spec.geometry, traffic, bg.at("seed").get<std::uint64_t>()));
    }
    spec.ego = ego_route_spec_from_json(j.value("ego", nlohmann::json::object()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("scenario: ") + e.what());
  }
  return spec;
}

ScenarioSpec load_scenario(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open scenario " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadFormat, path.string() + ": " + e.what());
  }
  return scenario_from_json(j, path.parent_path());
}

std::vector<fs::path> load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open manifest " + path.string());
  std::vector<fs::path> out;
  try {
    const auto j = nlohmann::json::parse(in);
    for (const auto& p : j.at("scenarios")) out.push_back(path.parent_path() / p.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadFormat, path.string() + ": " + e.what());
  }
  return out;
}

nlohmann::json to_json(const TripRecord& r) {
  nlohmann::json j = {{"t", r.t},
                      {"s", r.s},
                      {"x", r.pos.x},
                      {"y", r.pos.y},
                      {"heading", r.heading},
                      {"v", r.v},
                      {"a", r.a},
                      {"advised", r.advised ? nlohmann::json(*r.advised) : nlohmann::json()},
                      {"d_c", r.d_c},
                      {"d_e", r.d_e},
                      {"stage", std::string(to_string(r.stage))},
                      {"constrained", r.constrained}};
  if (r.occupancy) j["occupancy"] = to_json(*r.occupancy);
  return j;
}

TripRecord trip_record_from_json(const nlohmann::json& j) {
  TripRecord r;
  r.t = j.at("t").get<std::int64_t>();
  r.s = j.at("s").get<double>();
  r.pos = {j.at("x").get<double>(), j.at("y").get<double>()};
  r.heading = j.value("heading", 0.0);
  r.v = j.at("v").get<double>();
  r.a = j.value("a", 0.0);
  if (j.contains("advised") && !j.at("advised").is_null()) r.advised = j.at("advised").get<double>();
  r.d_c = j.value("d_c", 0.0);
  r.d_e = j.value("d_e", 0.0);
  const std::string stage = j.value("stage", std::string("not-triggered"));
  r.stage = stage == "crosswalk-only"        ? AdvisoryStage::CrosswalkOnly
            : stage == "crosswalk-and-entry" ? AdvisoryStage::CrosswalkAndEntry
                                             : AdvisoryStage::NotTriggered;
  r.constrained = j.value("constrained", false);
  if (j.contains("occupancy")) r.occupancy = occupancy_from_json(j.at("occupancy"));
  return r;
}

void write_trip_log(std::ostream& out, const TripLog& log) {
  nlohmann::json header = {{"format", "rosa-triplog"},
                           {"version", 1},
                           {"scenario", log.scenario},
                           {"mode", log.mode},
                           {"records", log.records.size()},
                           {"conflict", log.conflict},
                           {"optimizable", log.optimizable},
                           {"trigger_d_c", log.trigger_d_c ? nlohmann::json(*log.trigger_d_c) : nlohmann::json()},
                           {"trigger_d_e", log.trigger_d_e ? nlohmann::json(*log.trigger_d_e) : nlohmann::json()}};
  out << header.dump() << '\n';
  for (const auto& r : log.records) out << to_json(r).dump() << '\n';
}

std::vector<TripLog> read_trip_logs(std::istream& in) {
  std::vector<TripLog> logs;
  std::string line;
  std::size_t remaining = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::BadFormat, "trip log line " + std::to_string(lineno) + ": " + e.what());
    }
    if (remaining == 0) {
      if (j.value("format", std::string()) != "rosa-triplog")
        throw Error(ErrorCode::BadFormat, "trip log line " + std::to_string(lineno) + ": expected a header");
      TripLog log;
      log.scenario = j.value("scenario", std::string());
      log.mode = j.value("mode", std::string());
      log.conflict = j.value("conflict", false);
      log.optimizable = j.value("optimizable", false);
      if (!j.at("trigger_d_c").is_null()) log.trigger_d_c = j.at("trigger_d_c").get<double>();
      if (!j.at("trigger_d_e").is_null()) log.trigger_d_e = j.at("trigger_d_e").get<double>();
      remaining = j.at("records").get<std::size_t>();
      logs.push_back(std::move(log));
      continue;
    }
    logs.back().records.push_back(trip_record_from_json(j));
    --remaining;
  }
  if (remaining != 0) throw Error(ErrorCode::BadFormat, "trip log truncated");
  return logs;
}

TripLog read_trip_log(std::istream& in) {
  auto logs = read_trip_logs(in);
  if (logs.size() != 1) throw Error(ErrorCode::BadFormat, "expected exactly one trip log");
  return std::move(logs.front());
}

}  // namespace rosa
