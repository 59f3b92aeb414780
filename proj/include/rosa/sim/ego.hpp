#pragma once

#include "json.hpp"
#include "rosa/sim/route.hpp"

namespace rosa {

struct EgoParams {
  double v_cruise = 13.89;      // m/s, 50 km/h approach
  double v_entry = 8.0;         // entry negotiation speed
  double ramp_distance = 150.0; // m before the entry where the comfort ramp starts
  double v_ring = 8.0;
  double a_comfort = 1.5;       // m/s^2, default-profile acceleration
  double a_dec_max = 2.0;       // m/s^2, also the hard-stop deceleration
  double a_acc_max = 2.5;       // m/s^2, bound on any acceleration
  double v_through = 8.0;       // speed held through a committed zone
  double zone_margin = 0.5;     // m added on both sides of every zone interval
};

nlohmann::json to_json(const EgoParams& p);
EgoParams ego_params_from_json(const nlohmann::json& j);

/// Speed the unadvised driver aims for at arc length s: cruise until
/// ramp_distance before the entry, a linear ramp down to v_entry, v_ring in
/// the ring, cruise again after the exit.
double default_target_speed(const EgoRoute& route, const EgoParams& p, double s);

/// One second of the default driver: move towards the target within the
/// comfort acceleration and the deceleration limit.
double default_next_speed(const EgoRoute& route, const EgoParams& p, double s, double v);

/// Distance covered in one second of constant acceleration from v0 to v1.
inline double step_distance(double v0, double v1) { return 0.5 * (v0 + v1); }

/// Lowest speed allowed one second later inside a committed zone: brake
/// towards v_through from above, accelerate towards it from below.
double committed_floor(double v, const EgoParams& p);

/// Where the ego comes to rest when braking at a_dec_max from (s, v) on the
/// 1 s grid; while s < floor_until the committed floor applies. Returns +inf
/// if it never stops before `limit`.
double stop_position(double s, double v, const EgoParams& p, double floor_until, double limit);

/// Time to cover `dist` starting at v0 with constant acceleration `acc`
/// until the speed reaches `bound` (a cap for acc > 0, a floor for acc < 0),
/// constant afterwards. +inf if the ego would never get there.
double travel_time(double dist, double v0, double acc, double bound);

/// Time within [0, 1] at which a one-second constant-acceleration move from
/// (s, v0) to speed v1 reaches x, or nullopt if it does not.
std::optional<double> time_in_step(double s, double v0, double v1, double x);

}  // namespace rosa
