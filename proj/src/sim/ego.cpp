#include "rosa/sim/ego.hpp"

#include <cmath>
#include <limits>

namespace rosa {

nlohmann::json to_json(const EgoParams& p) {
  return {{"v_cruise", p.v_cruise},   {"v_entry", p.v_entry},     {"ramp_distance", p.ramp_distance},
          {"v_ring", p.v_ring},       {"a_comfort", p.a_comfort}, {"a_dec_max", p.a_dec_max},
          {"a_acc_max", p.a_acc_max}, {"v_through", p.v_through}, {"zone_margin", p.zone_margin}};
}

EgoParams ego_params_from_json(const nlohmann::json& j) {
  EgoParams p;
  p.v_cruise = j.value("v_cruise", p.v_cruise);
  p.v_entry = j.value("v_entry", p.v_entry);
  p.ramp_distance = j.value("ramp_distance", p.ramp_distance);
  p.v_ring = j.value("v_ring", p.v_ring);
  p.a_comfort = j.value("a_comfort", p.a_comfort);
  p.a_dec_max = j.value("a_dec_max", p.a_dec_max);
  p.a_acc_max = j.value("a_acc_max", p.a_acc_max);
  p.v_through = j.value("v_through", p.v_through);
  p.zone_margin = j.value("zone_margin", p.zone_margin);
  return p;
}

double default_target_speed(const EgoRoute& route, const EgoParams& p, double s) {
  if (s < route.s_entry) {
    const double d = route.s_entry - s;
    if (d >= p.ramp_distance) return p.v_cruise;
    return p.v_entry + (p.v_cruise - p.v_entry) * d / p.ramp_distance;
  }
  if (s < route.s_exit_line) return p.v_ring;
  return p.v_cruise;
}

double default_next_speed(const EgoRoute& route, const EgoParams& p, double s, double v) {
  const double target = default_target_speed(route, p, s);
  return std::clamp(target, std::max(0.0, v - p.a_dec_max), v + p.a_comfort);
}

double committed_floor(double v, const EgoParams& p) {
  if (v < p.v_through) return std::min(v + p.a_comfort, p.v_through);
  return std::max(v - p.a_dec_max, p.v_through);
}

double stop_position(double s, double v, const EgoParams& p, double floor_until, double limit) {
  for (int k = 0; k < 10000 && v > 0.0; ++k) {
    double next = std::max(0.0, v - p.a_dec_max);
    if (s < floor_until) next = std::max(next, committed_floor(v, p));
    s += step_distance(v, next);
    v = next;
    if (s > limit) return std::numeric_limits<double>::infinity();
  }
  return v > 0.0 ? std::numeric_limits<double>::infinity() : s;
}

double travel_time(double dist, double v0, double acc, double bound) {
  if (dist <= 0.0) return 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  if (acc == 0.0 || (acc > 0.0 && v0 >= bound) || (acc < 0.0 && v0 <= bound)) {
    const double v = acc == 0.0 ? v0 : (acc > 0.0 ? std::max(v0, bound) : std::min(v0, bound));
    return v > 0.0 ? dist / v : inf;
  }
  const double t_b = (bound - v0) / acc;
  const double d_b = v0 * t_b + 0.5 * acc * t_b * t_b;
  if (dist <= d_b) {
    // v0 t + acc t^2 / 2 = dist, smallest non-negative root
    const double disc = v0 * v0 + 2.0 * acc * dist;
    if (disc < 0.0) return inf;
    return (std::sqrt(disc) - v0) / acc;
  }
  return bound > 0.0 ? t_b + (dist - d_b) / bound : inf;
}

std::optional<double> time_in_step(double s, double v0, double v1, double x) {
  if (x <= s) return 0.0;
  if (s + step_distance(v0, v1) < x) return std::nullopt;
  const double a = v1 - v0;
  const double d = x - s;
  if (std::abs(a) < 1e-12) return v0 > 0.0 ? std::optional<double>(d / v0) : std::nullopt;
  const double disc = v0 * v0 + 2.0 * a * d;
  return std::clamp((std::sqrt(std::max(0.0, disc)) - v0) / a, 0.0, 1.0);
}

}  // namespace rosa
