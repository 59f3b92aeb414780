#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "rosa/data/synthetic.hpp"
#include "rosa/sim/simulator.hpp"

namespace rosa {

struct SuiteOptions {
  int count = 100;
  double optimizable_fraction = 0.2;
  std::uint64_t seed = 2024;
  std::int64_t duration = 100;  // background length in seconds
  /// Seconds around the nominal ego passage kept free of unplanned
  /// traffic in the ego's own zones.
  int clear_before = 8;
  int clear_after = 10;
};

nlohmann::json to_json(const SuiteOptions& o);
/// Missing keys keep their defaults. Throws InvalidSpec.
SuiteOptions suite_options_from_json(const nlohmann::json& j);

enum class ConflictDesign { None, Vru, Vehicle };

std::string_view to_string(ConflictDesign d);

struct SuiteScenario {
  std::string id;
  TrafficSpec traffic;
  std::uint64_t seed = 0;
  EgoRouteSpec ego;
  ConflictDesign design = ConflictDesign::None;
};

/// Times at which the unhindered ego reaches its crosswalk and entry.
struct NominalPassage {
  std::int64_t crosswalk = 0;
  std::int64_t entry = 0;
};

NominalPassage nominal_passage(const RoundaboutGeometry& geo, const EgoRouteSpec& ego,
                               const SimConfig& config, std::int64_t duration);

/// Random background on the other arms and crosswalks, with the ego's own
/// zones kept clear around its nominal passage; a seeded subset of
/// round(count * optimizable_fraction) scenarios gets one conflict placed
/// exactly at the nominal passage (a pedestrian on the ego crosswalk or a
/// circulating vehicle in the ego entry zone).
std::vector<SuiteScenario> make_suite(const RoundaboutGeometry& geo, const SuiteOptions& opt,
                                      const SimConfig& config = {});

ScenarioSpec to_scenario(const SuiteScenario& s, std::shared_ptr<const RoundaboutGeometry> geo);

/// Scenario file contents (synthetic background, default geometry).
nlohmann::json to_json(const SuiteScenario& s);

/// Writes one JSON file per scenario and manifest.json into `dir`.
void write_suite(const std::filesystem::path& dir, const std::vector<SuiteScenario>& suite);

}  // namespace rosa
