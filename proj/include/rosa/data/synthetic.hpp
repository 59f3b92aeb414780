#pragma once

#include <cstdint>
#include <vector>

#include "rosa/data/agent.hpp"
#include "json.hpp"
#include "rosa/data/roundabout.hpp"

namespace rosa {

struct ArmFlow {
  int arm = 0;
  double vehicles_per_minute = 0.0;
};

/// A pedestrian occupying crosswalk `zone_id` at every integer second in
/// [start, start + duration]. Walking speed follows from the crosswalk width
/// and must land in [1, 1.5] m/s.
struct VruCrossing {
  int zone_id = 0;
  std::int64_t start = 0;
  int duration = 4;
  int direction = 1;  // +1 walks towards the counter-clockwise side
};

struct ScheduledVehicle {
  int entry_arm = 0;
  int exit_arm = 1;
  double spawn_time = 0.0;  // s; the vehicle is at spawn_radial at this time
  double speed = 8.0;
};

struct TrafficSpec {
  std::int64_t duration = 60;        // frames at 1 Hz, t = 0 .. duration-1
  double circulating_speed = 8.0;    // m/s
  double speed_jitter = 1.0;         // uniform +/- around circulating_speed
  double spawn_radial = 80.0;        // distance from the center where vehicles appear
  double warmup = 30.0;              // s of arrivals simulated before t = 0
  std::vector<ArmFlow> flows;
  std::vector<VruCrossing> crossings;
  std::vector<ScheduledVehicle> vehicles;
  double vru_lead_in = 3.0;          // s walked on the sidewalk before and after the crossing
};

/// Deterministic 1 Hz scene: vehicles drive their route at constant speed,
/// pedestrians cross at constant pace. Kinematic fields are derived from
/// positions by finite differences. Throws InvalidSpec.
FrameSeries generate_synthetic_scenario(const RoundaboutGeometry& geo, const TrafficSpec& spec,
                                        std::uint64_t seed);

/// Random traffic for training corpora: Poisson flows on every arm and
/// pedestrian crossings on every crosswalk.
struct CorpusOptions {
  int count = 200;
  std::int64_t duration = 60;
  std::uint64_t seed = 7;
  double min_rate = 2.0;  // vehicles per minute per arm
  double max_rate = 8.0;
  int max_crossings = 3;  // per crosswalk and scenario
};

nlohmann::json to_json(const CorpusOptions& o);
CorpusOptions corpus_options_from_json(const nlohmann::json& j);

/// Traffic spec of corpus scenario `index`; the returned seed drives the
/// flow arrivals.
std::pair<TrafficSpec, std::uint64_t> corpus_traffic(const RoundaboutGeometry& geo, const CorpusOptions& opt,
                                                     int index);
std::vector<FrameSeries> synthetic_corpus(const RoundaboutGeometry& geo, const CorpusOptions& opt);

/// Recomputes v, theta, a_tan, a_lat of every agent from its positions.
void derive_kinematics(FrameSeries& series);

}  // namespace rosa
