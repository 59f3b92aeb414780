#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rosa/advisory/rosa.hpp"
#include "rosa/predictor/model.hpp"
#include "rosa/sim/ego.hpp"

namespace rosa {

enum class PredictorMode { None, GroundTruth, Model };

std::string_view to_string(PredictorMode m);

struct PredictorSetting {
  PredictorMode mode = PredictorMode::None;
  std::shared_ptr<const ModelParameters> model;  // Model mode only

  std::string label() const;
};

struct SimConfig {
  EgoParams ego;
  AdvisoryParams advisory;
  int history = 3;
  int horizon = 5;
  int max_steps = 900;
};

nlohmann::json to_json(const SimConfig& c);
SimConfig sim_config_from_json(const nlohmann::json& j);

struct ScenarioSpec {
  std::string id;
  std::shared_ptr<const RoundaboutGeometry> geometry;
  std::shared_ptr<const FrameSeries> background;
  EgoRouteSpec ego;
};

struct TripRecord {
  std::int64_t t = 0;
  double s = 0.0;         // arc length on the ego route
  Vec2 pos;
  double heading = 0.0;
  double v = 0.0;
  double a = 0.0;         // applied over the following second
  std::optional<double> advised;
  double d_c = 0.0;
  double d_e = 0.0;
  AdvisoryStage stage = AdvisoryStage::NotTriggered;
  bool constrained = false;  // safety layer overrode the requested speed
  std::optional<OccupancyMatrix> occupancy;
};

struct TripLog {
  std::string scenario;
  std::string mode;
  std::vector<TripRecord> records;
  /// Safety layer had to hold the ego back for an occupied zone.
  bool conflict = false;
  /// Set by the batch runner from the paired baseline run.
  bool optimizable = false;
  std::optional<double> trigger_d_c;  // d_c when the advisory first triggered
  std::optional<double> trigger_d_e;  // d_e at the same moment
};

/// Deterministic 1 Hz closed loop. Throws BackgroundExhausted, OffRoute.
TripLog run_scenario(const ScenarioSpec& spec, const PredictorSetting& predictor,
                     const SimConfig& config = {});

/// True iff the unadvised run meets an occupied crosswalk or entry.
bool classify_optimizable(const ScenarioSpec& spec, const SimConfig& config = {});

struct SafetyReport {
  int crosswalk_violations = 0;
  int entry_violations = 0;
  int total() const { return crosswalk_violations + entry_violations; }
};

/// Replays the log against the background: every second whose motion
/// touches an ego zone must find that zone clear at both ends.
SafetyReport check_safety(const TripLog& log, const ScenarioSpec& spec, const SimConfig& config = {});

}  // namespace rosa
