#include "rosa/sim/simulator.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "rosa/error.hpp"
#include "rosa/predictor/rollout.hpp"

namespace rosa {

std::string_view to_string(PredictorMode m) {
  switch (m) {
    case PredictorMode::None: return "none";
    case PredictorMode::GroundTruth: return "ground-truth";
    case PredictorMode::Model: return "model";
  }
  return "none";
}

std::string PredictorSetting::label() const {
  if (mode == PredictorMode::Model && model)
    return "model:" + std::string(to_string(model->config().features.variant));
  return std::string(to_string(mode));
}

nlohmann::json to_json(const SimConfig& c) {
  return {{"ego", to_json(c.ego)},
          {"advisory",
           {{"v_max", c.advisory.v_max},
            {"a_dec_max", c.advisory.a_dec_max},
            {"a_acc_max", c.advisory.a_acc_max},
            {"v_stop", c.advisory.v_stop},
            {"entry_time_basis", c.advisory.entry_time_basis == EntryTimeBasis::CurrentSpeed
                                     ? "current-speed"
                                     : "crosswalk-advice"}}},
          {"history", c.history},
          {"horizon", c.horizon},
          {"max_steps", c.max_steps}};
}

SimConfig sim_config_from_json(const nlohmann::json& j) {
  SimConfig c;
  if (j.contains("ego")) c.ego = ego_params_from_json(j.at("ego"));
  if (j.contains("advisory")) {
    const auto& a = j.at("advisory");
    c.advisory.v_max = a.value("v_max", c.advisory.v_max);
    c.advisory.a_dec_max = a.value("a_dec_max", c.advisory.a_dec_max);
    c.advisory.a_acc_max = a.value("a_acc_max", c.advisory.a_acc_max);
    c.advisory.v_stop = a.value("v_stop", c.advisory.v_stop);
    c.advisory.entry_time_basis = a.value("entry_time_basis", std::string("current-speed")) == "crosswalk-advice"
                                      ? EntryTimeBasis::CrosswalkAdvice
                                      : EntryTimeBasis::CurrentSpeed;
  }
  c.history = j.value("history", c.history);
  c.horizon = j.value("horizon", c.horizon);
  c.max_steps = j.value("max_steps", c.max_steps);
  return c;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Ground-truth occupancy of the two ego zones, cached per second.
class ZoneOracle {
 public:
  ZoneOracle(const FrameSeries& bg, const RoundaboutGeometry& geo, const EgoRoute& route)
      : bg_(bg), zones_{geo.zone(route.crosswalk.zone_id), geo.zone(route.entry.zone_id)} {}

  bool occupied(int which, std::int64_t t) {
    auto it = cache_.find(t);
    if (it == cache_.end()) {
      const Frame* f = bg_.at(t);
      if (!f) throw Error(ErrorCode::BackgroundExhausted, "background has no frame at t=" + std::to_string(t));
      const auto occ = occupancy_from_frame(f->agents, zones_);
      it = cache_.emplace(t, std::array<bool, 2>{occ[0], occ[1]}).first;
    }
    return it->second[static_cast<std::size_t>(which)];
  }

 private:
  const FrameSeries& bg_;
  std::vector<ConflictZone> zones_;
  std::map<std::int64_t, std::array<bool, 2>> cache_;
};

/// Collision-avoidance layer: the ego may only enter (or become unable to
/// stop before) a zone when the zone is clear for every second it could
/// possibly spend in it.
class SafetyLayer {
 public:
  SafetyLayer(const EgoRoute& route, const EgoParams& p, ZoneOracle& oracle)
      : route_(route), p_(p), oracle_(oracle), zones_{route.crosswalk, route.entry} {}

  double commit_end() const { return commit_end_; }

  struct Choice {
    double v_next;
    bool constrained;
  };

  Choice choose(std::int64_t t, double s, double v, double desired) {
    double v_lo = std::max(0.0, v - p_.a_dec_max);
    if (s < commit_end_) v_lo = std::max(v_lo, committed_floor(v, p_));
    desired = std::max(desired, v_lo);
    double ce = 0.0;
    if (feasible(t, s, v, desired, ce)) {
      commit_end_ = ce;
      return {desired, false};
    }
    if (!feasible(t, s, v, v_lo, ce)) {
      // cannot happen while the stop-or-commit invariant holds
      commit_end_ = std::max(commit_end_, ce);
      return {v_lo, true};
    }
    double lo = v_lo, hi = desired;
    for (int i = 0; i < 40; ++i) {
      const double mid = 0.5 * (lo + hi);
      double tmp = 0.0;
      if (feasible(t, s, v, mid, tmp)) lo = mid;
      else hi = mid;
    }
    feasible(t, s, v, lo, ce);
    commit_end_ = ce;
    return {lo, true};
  }

 private:
  double arrival(double s, double v, double v1, double x, double acc, double bound) const {
    if (auto tau = time_in_step(s, v, v1, x)) return *tau;
    return 1.0 + travel_time(x - (s + step_distance(v, v1)), v1, acc, bound);
  }

  bool window_clear(int which, std::int64_t t, double s, double v, double v1) {
    const ZoneInterval& z = zones_[which];
    const double a = z.begin - p_.zone_margin;
    const double b = z.end + p_.zone_margin;
    // earliest: default acceleration; latest: the committed floor
    const double t_in = arrival(s, v, v1, a, p_.a_comfort, p_.v_cruise);
    const double t_out = v1 < p_.v_through ? arrival(s, v, v1, b, p_.a_comfort, p_.v_through)
                                           : arrival(s, v, v1, b, -p_.a_dec_max, p_.v_through);
    if (!std::isfinite(t_out)) return false;
    const auto k0 = t + static_cast<std::int64_t>(std::floor(t_in));
    const auto k1 = t + static_cast<std::int64_t>(std::ceil(t_out));
    for (std::int64_t k = k0; k <= k1; ++k)
      if (oracle_.occupied(which, k)) return false;
    return true;
  }

  bool feasible(std::int64_t t, double s, double v, double v1, double& ce) {
    ce = commit_end_;
    const double s1 = s + step_distance(v, v1);
    for (int which = 0; which < 2; ++which) {
      const ZoneInterval& z = zones_[which];
      const double a = z.begin - p_.zone_margin;
      const double b = z.end + p_.zone_margin;
      if (b <= ce || b <= s) continue;
      if (s1 <= a && stop_position(s1, v1, p_, ce, a) <= a) return true;
      if (!window_clear(which, t, s, v, v1)) return false;
      ce = b;
    }
    return true;
  }

  const EgoRoute& route_;
  const EgoParams& p_;
  ZoneOracle& oracle_;
  ZoneInterval zones_[2];
  double commit_end_ = -kInf;
};

}  // namespace

TripLog run_scenario(const ScenarioSpec& spec, const PredictorSetting& predictor,
                     const SimConfig& config) {
  if (!spec.geometry || !spec.background)
    throw Error(ErrorCode::InvalidSpec, "scenario " + spec.id + " lacks geometry or background");
  if (predictor.mode == PredictorMode::Model && !predictor.model)
    throw Error(ErrorCode::InvalidSpec, "model predictor without parameters");
  const RoundaboutGeometry& geo = *spec.geometry;
  const FrameSeries& bg = *spec.background;
  const EgoRoute route = build_ego_route(geo, spec.ego);
  const EgoParams& ep = config.ego;
  const int m = config.horizon;

  ZoneOracle oracle(bg, geo, route);
  SafetyLayer safety(route, ep, oracle);
  std::unique_ptr<Predictor> model;
  if (predictor.mode == PredictorMode::Model) model = std::make_unique<TransformerPredictor>(predictor.model);

  TripLog log;
  log.scenario = spec.id;
  log.mode = predictor.label();
  std::int64_t t = spec.ego.start_time;
  double s = route.s_start;
  double v = spec.ego.initial_speed;
  std::optional<double> held;  // advised speed in force

  for (int step = 0;; ++step) {
    if (step > config.max_steps)
      throw Error(ErrorCode::InvalidSpec, "scenario " + spec.id + " did not finish within max_steps");
    TripRecord rec;
    rec.t = t;
    rec.s = s;
    rec.pos = route.path.position_at(s);
    rec.heading = route.path.heading_at(s);
    rec.v = v;
    rec.d_c = route.d_c(s);
    rec.d_e = route.d_e(s);
    if (s >= route.s_end) {
      log.records.push_back(std::move(rec));
      break;
    }

    double desired = default_next_speed(route, ep, s, v);
    if (predictor.mode != PredictorMode::None && s < route.s_entry) {
      const bool cw_passed = s >= route.crosswalk.begin;
      const auto t_c = cw_passed ? std::nullopt : time_to_arrival(rec.d_c, v, config.advisory.v_stop);
      const auto t_e = time_to_arrival(rec.d_e, v, config.advisory.v_stop);
      const bool triggered = cw_passed ? (t_e && *t_e <= m) : (t_c && *t_c <= m);
      if (!(cw_passed ? t_e : t_c)) held.reset();  // standstill: the advisory abstains
      if (triggered) {
        AdvisoryInput in;
        in.v = v;
        in.d_c = rec.d_c;
        in.d_e = rec.d_e;
        in.crosswalk_zone = route.crosswalk.zone_id;
        in.entry_zone = route.entry.zone_id;
        in.crosswalk_passed = cw_passed;
        if (predictor.mode == PredictorMode::GroundTruth) {
          in.occupancy = ground_truth_occupancy(bg, t, geo.zones, m);
        } else {
          const auto hist = history_window(bg, t, config.history);
          if (hist.empty()) throw Error(ErrorCode::BackgroundExhausted, "no background history at t=" + std::to_string(t));
          in.occupancy = occupancy_series(model->rollout(hist, m), geo.zones, m, OccupancySource::Predicted);
        }
        const AdvisoryOutput out = rosa_step(in, config.advisory);
        rec.stage = out.stage;
        rec.advised = out.advised_speed;
        rec.occupancy = in.occupancy;
        if (out.stage != AdvisoryStage::NotTriggered && !log.trigger_d_c) log.trigger_d_c = rec.d_c;
        if (out.stage != AdvisoryStage::NotTriggered && !log.trigger_d_e) log.trigger_d_e = rec.d_e;
        // An issued advisory stays in force until the next one replaces it
        // or the ego enters the ring.
        if (out.advised_speed) held = out.advised_speed;
      }
      if (held) {
        const double limited = apply_decel_limit(v, *held, 1.0, config.advisory.a_dec_max,
                                                 config.advisory.a_acc_max, config.advisory.v_max);
        desired = std::min(desired, limited);
      }
    } else {
      held.reset();
    }

    const auto choice = safety.choose(t, s, v, desired);
    rec.constrained = choice.constrained;
    rec.a = choice.v_next - v;
    log.conflict = log.conflict || choice.constrained;
    log.records.push_back(std::move(rec));
    s += step_distance(v, choice.v_next);
    v = choice.v_next;
    ++t;
  }
  return log;
}

bool classify_optimizable(const ScenarioSpec& spec, const SimConfig& config) {
  return run_scenario(spec, {}, config).conflict;
}

SafetyReport check_safety(const TripLog& log, const ScenarioSpec& spec, const SimConfig&) {
  const EgoRoute route = build_ego_route(*spec.geometry, spec.ego);
  ZoneOracle oracle(*spec.background, *spec.geometry, route);
  SafetyReport rep;
  const ZoneInterval zones[2] = {route.crosswalk, route.entry};
  for (std::size_t k = 0; k + 1 < log.records.size(); ++k) {
    const auto& r0 = log.records[k];
    const auto& r1 = log.records[k + 1];
    for (int which = 0; which < 2; ++which) {
      const auto& z = zones[which];
      if (r1.s < z.begin || r0.s > z.end) continue;
      if (oracle.occupied(which, r0.t) || oracle.occupied(which, r1.t))
        (which == 0 ? rep.crosswalk_violations : rep.entry_violations)++;
    }
  }
  return rep;
}

}  // namespace rosa
