#include "rosa/advisory/rosa.hpp"

#include <algorithm>
#include <cmath>

#include "rosa/error.hpp"

namespace rosa {

std::string_view to_string(AdvisoryStage s) {
  switch (s) {
    case AdvisoryStage::NotTriggered: return "not-triggered";
    case AdvisoryStage::CrosswalkOnly: return "crosswalk-only";
    case AdvisoryStage::CrosswalkAndEntry: return "crosswalk-and-entry";
  }
  return "not-triggered";
}

nlohmann::json to_json(const AdvisoryOutput& out) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& z : out.rationale) {
    trace.push_back({{"zone", z.zone_id},
                     {"kind", z.kind == ZoneKind::Crosswalk ? "crosswalk" : "entry"},
                     {"arrival_step", z.arrival_step ? nlohmann::json(*z.arrival_step) : nlohmann::json()},
                     {"beyond_horizon", z.beyond_horizon},
                     {"occupied", z.occupied},
                     {"target_speed", z.target_speed}});
  }
  return {{"advised_speed", out.advised_speed ? nlohmann::json(*out.advised_speed) : nlohmann::json()},
          {"stage", std::string(to_string(out.stage))},
          {"rationale", trace}};
}

std::optional<int> time_to_arrival(double d, double v, double v_stop) {
  if (d < 0.0) throw Error(ErrorCode::NegativeDistance, "distance " + std::to_string(d) + " < 0");
  if (v <= v_stop) return std::nullopt;
  // guard against 45/15 landing a hair above 3
  const double q = d / v;
  const double r = std::round(q);
  if (std::abs(q - r) < 1e-9) return static_cast<int>(r);
  return static_cast<int>(std::ceil(q));
}

double optimal_speed(double d, double t, double v, double v_max) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonPositiveTime, "arrival time must be positive");
  if (d < 0.0) throw Error(ErrorCode::NegativeDistance, "distance " + std::to_string(d) + " < 0");
  return std::clamp(2.0 * d / t - v, 0.0, v_max);
}

namespace {

/// Occupancy at an arrival step; steps past the horizon are unknown and
/// treated as clear. A zero step (already at the line) reads step 1.
ZoneTrace check_zone(const OccupancyMatrix& occ, int zone_id, ZoneKind kind, int arrival) {
  ZoneTrace z;
  z.zone_id = zone_id;
  z.kind = kind;
  z.arrival_step = arrival;
  if (arrival > occ.horizon()) {
    z.beyond_horizon = true;
    return z;
  }
  z.occupied = occ.occupied(zone_id, std::max(1, arrival));
  return z;
}

}  // namespace

AdvisoryOutput rosa_step(const AdvisoryInput& in, const AdvisoryParams& p) {
  AdvisoryOutput out;
  const int m = in.occupancy.horizon();
  double v_c = in.v;
  if (!in.crosswalk_passed) {
    const auto t_c = time_to_arrival(in.d_c, in.v, p.v_stop);
    if (!t_c || *t_c > m) return out;
    ZoneTrace z = check_zone(in.occupancy, in.crosswalk_zone, ZoneKind::Crosswalk, *t_c);
    if (z.occupied) v_c = optimal_speed(in.d_c, *t_c + 1, in.v, p.v_max);
    z.target_speed = v_c;
    out.rationale.push_back(z);
    out.stage = AdvisoryStage::CrosswalkOnly;
    out.advised_speed = std::min(v_c, p.v_max);
  }

  const double basis = p.entry_time_basis == EntryTimeBasis::CurrentSpeed ? in.v : v_c;
  const auto t_e = time_to_arrival(in.d_e, basis, p.v_stop);
  if (!t_e || *t_e > m) return out;
  ZoneTrace z = check_zone(in.occupancy, in.entry_zone, ZoneKind::Entry, *t_e);
  const double v_e = z.occupied ? optimal_speed(in.d_e, *t_e + 1, in.v, p.v_max) : v_c;
  z.target_speed = v_e;
  out.rationale.push_back(z);
  out.stage = AdvisoryStage::CrosswalkAndEntry;
  out.advised_speed = std::min(v_e, p.v_max);
  return out;
}

double apply_decel_limit(double v_now, double v_advised, double dt, double a_dec_max,
                         double a_acc_max, double v_max) {
  const double v = std::clamp(v_advised, v_now - a_dec_max * dt, v_now + a_acc_max * dt);
  return std::clamp(v, 0.0, v_max);
}

}  // namespace rosa
