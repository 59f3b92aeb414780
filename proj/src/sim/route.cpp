#include "rosa/sim/route.hpp"

#include "rosa/error.hpp"

namespace rosa {

nlohmann::json to_json(const EgoRouteSpec& e) {
  return {{"approach_arm", e.approach_arm}, {"crosswalk_zone", e.crosswalk_zone},
          {"entry_zone", e.entry_zone},     {"exit_arm", e.exit_arm},
          {"start_distance", e.start_distance}, {"initial_speed", e.initial_speed},
          {"start_time", e.start_time},     {"run_out", e.run_out}};
}

EgoRouteSpec ego_route_spec_from_json(const nlohmann::json& j) {
  EgoRouteSpec e;
  e.approach_arm = j.value("approach_arm", e.approach_arm);
  e.crosswalk_zone = j.value("crosswalk_zone", e.crosswalk_zone);
  e.entry_zone = j.value("entry_zone", e.entry_zone);
  e.exit_arm = j.value("exit_arm", e.exit_arm);
  e.start_distance = j.value("start_distance", e.start_distance);
  e.initial_speed = j.value("initial_speed", e.initial_speed);
  e.start_time = j.value("start_time", e.start_time);
  e.run_out = j.value("run_out", e.run_out);
  return e;
}

EgoRoute build_ego_route(const RoundaboutGeometry& geo, const EgoRouteSpec& spec) {
  const ConflictZone& cw = geo.zone(spec.crosswalk_zone);
  const ConflictZone& en = geo.zone(spec.entry_zone);
  if (cw.kind != ZoneKind::Crosswalk || en.kind != ZoneKind::Entry)
    throw Error(ErrorCode::OffRoute, "ego zones must be one crosswalk and one entry zone");
  if (cw.arm_id != spec.approach_arm || en.arm_id != spec.approach_arm)
    throw Error(ErrorCode::OffRoute, "ego zones do not belong to approach arm " +
                                         std::to_string(spec.approach_arm));
  if (spec.exit_arm == spec.approach_arm)
    throw Error(ErrorCode::OffRoute, "u-turns are not supported");

  EgoRoute r;
  r.path = vehicle_route(geo, spec.approach_arm, spec.exit_arm,
                         geo.circulating_radius + spec.run_out + 1.0);
  r.s_entry = entry_line_arc_length(geo, spec.approach_arm);
  r.s_start = r.s_entry - spec.start_distance;
  if (r.s_start < 0.0 || spec.start_distance <= 0.0)
    throw Error(ErrorCode::OffRoute, "start distance exceeds the approach length");
  r.s_exit_line = r.path.project(
      geo.arm_point(spec.exit_arm, geo.circulating_radius, -geo.approach_lane_offset));
  r.s_end = r.s_exit_line + spec.run_out;

  // crosswalk: first and last sampled arc lengths inside the polygon
  constexpr double step = 0.01;
  double first = -1.0, last = -1.0;
  for (double s = r.s_start; s <= r.s_entry; s += step)
    if (point_in_zone(r.path.position_at(s), cw)) {
      if (first < 0.0) first = s;
      last = s;
    }
  if (first < 0.0) throw Error(ErrorCode::OffRoute, "ego approach does not cross its crosswalk");
  r.crosswalk = {cw.id, ZoneKind::Crosswalk, first, last};
  r.entry = {en.id, ZoneKind::Entry, r.s_entry, r.s_entry + geo.lane_width};
  return r;
}

}  // namespace rosa
