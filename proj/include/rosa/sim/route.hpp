#pragma once

#include "json.hpp"
#include "rosa/data/roundabout.hpp"

namespace rosa {

struct EgoRouteSpec {
  int approach_arm = 0;
  int crosswalk_zone = 0;
  int entry_zone = 3;
  int exit_arm = 2;
  double start_distance = 250.0;  // m before the entry line
  double initial_speed = 13.89;   // m/s
  std::int64_t start_time = 4;    // s; leaves room for predictor history
  double run_out = 100.0;         // m driven on the exit arm after leaving the ring
};

nlohmann::json to_json(const EgoRouteSpec& e);
EgoRouteSpec ego_route_spec_from_json(const nlohmann::json& j);

/// Arc-length interval of the ego path that lies inside a conflict zone.
struct ZoneInterval {
  int zone_id = 0;
  ZoneKind kind = ZoneKind::Crosswalk;
  double begin = 0.0;
  double end = 0.0;
};

struct EgoRoute {
  Path path;
  double s_start = 0.0;
  double s_entry = 0.0;      // entry line
  double s_exit_line = 0.0;  // leaves the ring
  double s_end = 0.0;        // episode ends here
  ZoneInterval crosswalk;
  /// The ego occupies the entry zone while merging: from the entry line
  /// across one lane width.
  ZoneInterval entry;

  double d_c(double s) const { return std::max(0.0, crosswalk.begin - s); }
  double d_e(double s) const { return std::max(0.0, s_entry - s); }
};

/// Throws OffRoute if the zones do not belong to the approach arm or the
/// start lies off the approach polyline.
EgoRoute build_ego_route(const RoundaboutGeometry& geo, const EgoRouteSpec& spec);

}  // namespace rosa
