#include "rosa/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rosa/data/preprocess.hpp"
#include "rosa/error.hpp"
#include "rosa/rng.hpp"

namespace rosa {

namespace {

struct Track {
  AgentId id;
  AgentClass cls;
  std::map<std::int64_t, Vec2> positions;
};

void check_spec(const RoundaboutGeometry& geo, const TrafficSpec& spec) {
  auto bad = [](const std::string& msg) { return Error(ErrorCode::InvalidSpec, msg); };
  if (spec.duration < 0) throw bad("duration must be non-negative");
  if (!(spec.circulating_speed > 0.0) || spec.speed_jitter < 0.0 ||
      spec.speed_jitter >= spec.circulating_speed)
    throw bad("circulating speed must be positive and exceed the jitter");
  if (spec.spawn_radial <= geo.circulating_radius + geo.crosswalk_offset + geo.crosswalk_depth)
    throw bad("spawn_radial must lie outside the crosswalks");
  for (const auto& f : spec.flows) {
    geo.arm(f.arm);
    if (f.vehicles_per_minute < 0.0) throw bad("negative arrival rate");
  }
  for (const auto& v : spec.vehicles) {
    geo.arm(v.entry_arm);
    geo.arm(v.exit_arm);
    if (!(v.speed > 0.0)) throw bad("scheduled vehicle speed must be positive");
  }
  for (const auto& c : spec.crossings) {
    bool found = false;
    for (const auto& z : geo.zones) {
      if (z.id != c.zone_id) continue;
      found = true;
      if (z.kind != ZoneKind::Crosswalk)
        throw bad("VRU crossing refers to non-crosswalk zone " + std::to_string(c.zone_id));
    }
    if (!found) throw bad("VRU crossing refers to unknown zone " + std::to_string(c.zone_id));
    if (c.duration < 1) throw bad("crossing duration must be at least 1 s");
    const double pace = 2.0 * geo.crosswalk_half_width / (c.duration + 1);
    if (pace < 1.0 - 1e-9 || pace > 1.5 + 1e-9)
      throw bad("crossing duration " + std::to_string(c.duration) +
                " s implies a walking speed outside [1, 1.5] m/s");
    if (c.direction != 1 && c.direction != -1) throw bad("crossing direction must be +1 or -1");
  }
}

}  // namespace

void derive_kinematics(FrameSeries& series) {
  std::map<AgentId, std::vector<std::pair<std::size_t, std::size_t>>> where;  // frame idx, agent idx
  for (std::size_t fi = 0; fi < series.frames.size(); ++fi)
    for (std::size_t ai = 0; ai < series.frames[fi].agents.size(); ++ai)
      where[series.frames[fi].agents[ai].id].emplace_back(fi, ai);
  for (auto& [id, refs] : where) {
    auto state = [&](std::size_t k) -> AgentState& {
      return series.frames[refs[k].first].agents[refs[k].second];
    };
    const std::size_t n = refs.size();
    for (std::size_t k = 0; k < n; ++k) {
      AgentState& s = state(k);
      if (n == 1) continue;
      const Vec2 d = k == 0 ? state(1).pos - s.pos : s.pos - state(k - 1).pos;
      s.v = d.norm();
      if (s.v > 1e-12) s.theta = wrap_angle(std::atan2(d.y, d.x));
    }
    for (std::size_t k = 0; k < n; ++k) {
      AgentState& s = state(k);
      if (k == 0) {
        s.a_tan = 0.0;
        s.a_lat = 0.0;
        continue;
      }
      const AgentState& prev = state(k - 1);
      s.a_tan = s.v - prev.v;
      s.a_lat = s.v * wrap_angle(s.theta - prev.theta);
    }
  }
}

FrameSeries generate_synthetic_scenario(const RoundaboutGeometry& geo, const TrafficSpec& spec,
                                        std::uint64_t seed) {
  check_spec(geo, spec);
  Rng rng(seed);
  std::vector<Track> tracks;
  AgentId next_vehicle = 1000, next_vru = 50000;

  std::vector<ScheduledVehicle> vehicles = spec.vehicles;
  for (const auto& flow : spec.flows) {
    if (flow.vehicles_per_minute <= 0.0) continue;
    const double rate = flow.vehicles_per_minute / 60.0;
    double t = -spec.warmup + rng.exponential(rate);
    while (t < static_cast<double>(spec.duration)) {
      ScheduledVehicle v;
      v.entry_arm = flow.arm;
      std::vector<int> exits;
      for (const auto& a : geo.arms)
        if (a.id != flow.arm) exits.push_back(a.id);
      v.exit_arm = exits[rng.index(exits.size())];
      v.spawn_time = t;
      v.speed = spec.circulating_speed + rng.uniform(-spec.speed_jitter, spec.speed_jitter);
      vehicles.push_back(v);
      // 2 s minimum headway keeps arrivals from overlapping on the approach
      t += std::max(2.0, rng.exponential(rate));
    }
  }

  for (const auto& v : vehicles) {
    const Path route = vehicle_route(geo, v.entry_arm, v.exit_arm, spec.spawn_radial);
    const double s0 = route.project(
        geo.arm_point(v.entry_arm, spec.spawn_radial, geo.approach_lane_offset));
    Track tr{next_vehicle++, AgentClass::Vehicle, {}};
    for (std::int64_t t = 0; t < spec.duration; ++t) {
      const double s = s0 + v.speed * (static_cast<double>(t) - v.spawn_time);
      if (s < s0 - 1e-9 || s > route.length() + 1e-9) continue;
      tr.positions[t] = route.position_at(s);
    }
    if (!tr.positions.empty()) tracks.push_back(std::move(tr));
  }

  for (const auto& c : spec.crossings) {
    const ConflictZone& z = geo.zone(c.zone_id);
    const double half = geo.crosswalk_half_width;
    const double pace = 2.0 * half / (c.duration + 1);
    const double radial = geo.circulating_radius + geo.crosswalk_offset + 0.5 * geo.crosswalk_depth;
    Track tr{next_vru++, AgentClass::VRU, {}};
    const auto lead = static_cast<std::int64_t>(std::ceil(spec.vru_lead_in));
    for (std::int64_t k = -lead; k <= c.duration + lead; ++k) {
      const std::int64_t t = c.start + k;
      if (t < 0 || t >= spec.duration) continue;
      const double lateral = c.direction * (-half + 0.5 * pace + static_cast<double>(k) * pace);
      tr.positions[t] = geo.arm_point(z.arm_id, radial, lateral);
    }
    if (!tr.positions.empty()) tracks.push_back(std::move(tr));
  }

  FrameSeries series;
  series.frequency_hz = 1.0;
  series.geometry_id = geo.id;
  series.frames.resize(static_cast<std::size_t>(spec.duration));
  for (std::int64_t t = 0; t < spec.duration; ++t) series.frames[static_cast<std::size_t>(t)].t = t;
  for (const auto& tr : tracks)
    for (const auto& [t, p] : tr.positions) {
      AgentState s;
      s.id = tr.id;
      s.cls = tr.cls;
      s.pos = p;
      series.frames[static_cast<std::size_t>(t)].agents.push_back(s);
    }
  for (auto& f : series.frames)
    std::sort(f.agents.begin(), f.agents.end(),
              [](const AgentState& a, const AgentState& b) { return a.id < b.id; });
  derive_kinematics(series);
  return infer_exit_labels(series, geo);
}

nlohmann::json to_json(const CorpusOptions& o) {
  return {{"count", o.count},       {"duration", o.duration}, {"seed", o.seed},
          {"min_rate", o.min_rate}, {"max_rate", o.max_rate}, {"max_crossings", o.max_crossings}};
}

CorpusOptions corpus_options_from_json(const nlohmann::json& j) {
  CorpusOptions o;
  o.count = j.value("count", o.count);
  o.duration = j.value("duration", o.duration);
  o.seed = j.value("seed", o.seed);
  o.min_rate = j.value("min_rate", o.min_rate);
  o.max_rate = j.value("max_rate", o.max_rate);
  o.max_crossings = j.value("max_crossings", o.max_crossings);
  if (o.count < 1 || o.duration < 1 || o.min_rate < 0.0 || o.max_rate < o.min_rate || o.max_crossings < 0)
    throw Error(ErrorCode::InvalidSpec, "bad corpus options");
  return o;
}

std::pair<TrafficSpec, std::uint64_t> corpus_traffic(const RoundaboutGeometry& geo, const CorpusOptions& opt,
                                                     int index) {
  Rng rng(derive_seed(opt.seed, "corpus", static_cast<std::uint64_t>(index)));
  TrafficSpec spec;
  spec.duration = opt.duration;
  for (const auto& arm : geo.arms)
    spec.flows.push_back({arm.id, std::round(rng.uniform(opt.min_rate, opt.max_rate) * 100.0) / 100.0});
  for (const auto& z : geo.zones) {
    if (z.kind != ZoneKind::Crosswalk) continue;
    const auto n = rng.index(static_cast<std::uint64_t>(opt.max_crossings) + 1);
    for (std::uint64_t k = 0; k < n; ++k) {
      const int dur = 3 + static_cast<int>(rng.index(3));
      const auto start = static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(std::max<std::int64_t>(1, opt.duration - dur))));
      spec.crossings.push_back({z.id, start, dur, rng.uniform() < 0.5 ? 1 : -1});
    }
  }
  return {spec, derive_seed(opt.seed, "corpus-flows", static_cast<std::uint64_t>(index))};
}

std::vector<FrameSeries> synthetic_corpus(const RoundaboutGeometry& geo, const CorpusOptions& opt) {
  std::vector<FrameSeries> out;
  out.reserve(static_cast<std::size_t>(opt.count));
  for (int i = 0; i < opt.count; ++i) {
    const auto [spec, seed] = corpus_traffic(geo, opt, i);
    out.push_back(generate_synthetic_scenario(geo, spec, seed));
  }
  return out;
}

}  // namespace rosa
