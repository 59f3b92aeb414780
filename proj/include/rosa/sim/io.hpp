#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "json.hpp"
#include "rosa/data/synthetic.hpp"
#include "rosa/sim/simulator.hpp"

namespace rosa {

nlohmann::json to_json(const TrafficSpec& spec);
TrafficSpec traffic_spec_from_json(const nlohmann::json& j);

/// Scenario file: {"id", "geometry": path or absent for the default layout,
/// "background": {"file": path} or {"synthetic": TrafficSpec, "seed": n},
/// "ego": EgoRouteSpec}. Relative paths resolve against the file's folder.
ScenarioSpec load_scenario(const std::filesystem::path& path);

/// Builds a scenario from its JSON description.
ScenarioSpec scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Manifest: {"scenarios": [relative paths]}.
std::vector<std::filesystem::path> load_manifest(const std::filesystem::path& path);

nlohmann::json to_json(const TripRecord& r);
TripRecord trip_record_from_json(const nlohmann::json& j);

/// JSON lines: a header {"format":"rosa-triplog", "scenario", "mode",
/// "conflict", "optimizable", ...} then one record per second.
void write_trip_log(std::ostream& out, const TripLog& log);
TripLog read_trip_log(std::istream& in);
/// Several logs concatenated in one stream.
std::vector<TripLog> read_trip_logs(std::istream& in);

}  // namespace rosa
