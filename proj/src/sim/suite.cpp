#include "rosa/sim/suite.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "rosa/error.hpp"
#include "rosa/rng.hpp"
#include "rosa/sim/io.hpp"

namespace rosa {

namespace fs = std::filesystem;

nlohmann::json to_json(const SuiteOptions& o) {
  return {{"count", o.count},       {"optimizable_fraction", o.optimizable_fraction},
          {"seed", o.seed},         {"duration", o.duration},
          {"clear_before", o.clear_before}, {"clear_after", o.clear_after}};
}

SuiteOptions suite_options_from_json(const nlohmann::json& j) {
  SuiteOptions o;
  o.count = j.value("count", o.count);
  o.optimizable_fraction = j.value("optimizable_fraction", o.optimizable_fraction);
  o.seed = j.value("seed", o.seed);
  o.duration = j.value("duration", o.duration);
  o.clear_before = j.value("clear_before", o.clear_before);
  o.clear_after = j.value("clear_after", o.clear_after);
  if (o.count < 1 || o.optimizable_fraction < 0.0 || o.optimizable_fraction > 1.0 || o.duration < 1 ||
      o.clear_before < 0 || o.clear_after < 0)
    throw Error(ErrorCode::InvalidSpec, "bad suite options");
  return o;
}

std::string_view to_string(ConflictDesign d) {
  switch (d) {
    case ConflictDesign::None: return "none";
    case ConflictDesign::Vru: return "vru";
    case ConflictDesign::Vehicle: return "vehicle";
  }
  return "none";
}

NominalPassage nominal_passage(const RoundaboutGeometry& geo, const EgoRouteSpec& ego,
                               const SimConfig& config, std::int64_t duration) {
  ScenarioSpec spec;
  spec.id = "nominal";
  spec.geometry = std::make_shared<RoundaboutGeometry>(geo);
  auto bg = std::make_shared<FrameSeries>();
  bg->geometry_id = geo.id;
  for (std::int64_t t = 0; t < duration; ++t) bg->frames.push_back({t, {}});
  spec.background = bg;
  spec.ego = ego;
  const TripLog log = run_scenario(spec, {}, config);
  const EgoRoute route = build_ego_route(geo, ego);
  NominalPassage p;
  bool cw = false, en = false;
  for (const auto& r : log.records) {
    if (!cw && r.s >= route.crosswalk.begin) {
      p.crosswalk = r.t;
      cw = true;
    }
    if (!en && r.s >= route.entry.begin) {
      p.entry = r.t;
      en = true;
    }
  }
  if (!cw || !en) throw Error(ErrorCode::OffRoute, "nominal ego run never reached its zones");
  return p;
}

namespace {

/// Seconds at which `zone_id` is occupied by the traffic of `spec` alone.
std::vector<std::int64_t> occupied_seconds(const RoundaboutGeometry& geo, const TrafficSpec& spec,
                                           int zone_id) {
  const FrameSeries s = generate_synthetic_scenario(geo, spec, 0);
  const std::vector<ConflictZone> zone{geo.zone(zone_id)};
  std::vector<std::int64_t> out;
  for (const auto& f : s.frames)
    if (occupancy_from_frame(f.agents, zone)[0]) out.push_back(f.t);
  return out;
}

TrafficSpec only(const TrafficSpec& base, const ScheduledVehicle& v) {
  TrafficSpec s = base;
  s.flows.clear();
  s.crossings.clear();
  s.vehicles = {v};
  return s;
}

bool baseline_stops(const RoundaboutGeometry& geo, const SuiteScenario& sc, const SimConfig& config) {
  const TripLog log = run_scenario(to_scenario(sc, std::make_shared<RoundaboutGeometry>(geo)), {}, config);
  for (std::size_t k = 1; k < log.records.size(); ++k)
    if (log.records[k].v < config.advisory.v_stop && log.records[k - 1].v >= config.advisory.v_stop) return true;
  return false;
}

bool overlaps(const std::vector<std::int64_t>& secs, std::int64_t lo, std::int64_t hi) {
  return std::any_of(secs.begin(), secs.end(), [&](std::int64_t t) { return t >= lo && t <= hi; });
}

}  // namespace

std::vector<SuiteScenario> make_suite(const RoundaboutGeometry& geo, const SuiteOptions& opt,
                                      const SimConfig& config) {
  if (opt.count < 1 || opt.optimizable_fraction < 0.0 || opt.optimizable_fraction > 1.0)
    throw Error(ErrorCode::InvalidSpec, "bad suite options");
  const EgoRouteSpec ego;
  const NominalPassage nominal = nominal_passage(geo, ego, config, opt.duration);
  const std::int64_t lo = nominal.crosswalk - opt.clear_before;
  const std::int64_t hi = nominal.entry + opt.clear_after;
  const int cw_zone = ego.crosswalk_zone;
  const int en_zone = ego.entry_zone;

  std::vector<int> order(static_cast<std::size_t>(opt.count));
  std::iota(order.begin(), order.end(), 0);
  Rng pick(derive_seed(opt.seed, "suite-designs"));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[pick.index(i)]);
  const auto n_opt = static_cast<std::size_t>(std::lround(opt.count * opt.optimizable_fraction));
  std::vector<bool> designed(order.size(), false);
  for (std::size_t k = 0; k < n_opt; ++k) designed[static_cast<std::size_t>(order[k])] = true;

  std::vector<int> other_crosswalks;
  for (const auto& z : geo.zones)
    if (z.kind == ZoneKind::Crosswalk && z.id != cw_zone) other_crosswalks.push_back(z.id);

  std::vector<SuiteScenario> suite;
  for (int i = 0; i < opt.count; ++i) {
    Rng rng(derive_seed(opt.seed, "suite", static_cast<std::uint64_t>(i)));
    SuiteScenario sc;
    char id[16];
    std::snprintf(id, sizeof id, "s%03d", i);
    sc.id = id;
    sc.seed = derive_seed(opt.seed, "suite-background", static_cast<std::uint64_t>(i));
    sc.ego = ego;
    TrafficSpec& tr = sc.traffic;
    tr.duration = opt.duration;

    // vehicles from the other arms, Poisson arrivals
    for (const auto& arm : geo.arms) {
      if (arm.id == ego.approach_arm) continue;
      const double rate = rng.uniform(2.0, 6.0) / 60.0;
      for (double t = -tr.warmup + rng.exponential(rate); t < static_cast<double>(opt.duration);
           t += std::max(2.0, rng.exponential(rate))) {
        ScheduledVehicle v;
        v.entry_arm = arm.id;
        std::vector<int> exits;
        for (const auto& a : geo.arms)
          if (a.id != arm.id) exits.push_back(a.id);
        v.exit_arm = exits[rng.index(exits.size())];
        v.spawn_time = std::round(t * 10.0) / 10.0;
        v.speed = std::round((tr.circulating_speed + rng.uniform(-tr.speed_jitter, tr.speed_jitter)) * 100.0) / 100.0;
        if (!overlaps(occupied_seconds(geo, only(tr, v), en_zone), lo, hi)) tr.vehicles.push_back(v);
      }
    }
    // pedestrians on the other crosswalks, and on the ego crosswalk away from the passage
    for (int z : other_crosswalks) {
      const auto n = rng.index(4);
      for (std::uint64_t k = 0; k < n; ++k) {
        const int dur = 3 + static_cast<int>(rng.index(3));
        const auto start = static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(opt.duration - dur)));
        tr.crossings.push_back({z, start, dur, rng.uniform() < 0.5 ? 1 : -1});
      }
    }
    for (std::uint64_t k = 0, n = rng.index(3); k < n; ++k) {
      const int dur = 3 + static_cast<int>(rng.index(3));
      const auto start = static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(opt.duration - dur)));
      if (start + dur < lo || start > hi) tr.crossings.push_back({cw_zone, start, dur, rng.uniform() < 0.5 ? 1 : -1});
    }

    if (designed[static_cast<std::size_t>(i)]) {
      // Candidate timings in seeded order; keep the first that makes the
      // unadvised ego stop.
      const bool vru = rng.uniform() < 0.6;
      sc.design = vru ? ConflictDesign::Vru : ConflictDesign::Vehicle;
      std::vector<TrafficSpec> candidates;
      if (vru) {
        for (int dur = 4; dur <= 5; ++dur)
          for (int k = 0; k < dur - 1; ++k) {
            TrafficSpec c = tr;
            c.crossings.push_back({cw_zone, nominal.crosswalk - k, dur, rng.uniform() < 0.5 ? 1 : -1});
            candidates.push_back(std::move(c));
          }
      } else {
        const int upstream = geo.arms[static_cast<std::size_t>(
            (static_cast<std::size_t>(ego.approach_arm) + geo.arms.size() - 1) % geo.arms.size())].id;
        std::vector<int> exits;
        for (const auto& a : geo.arms)
          if (a.id != upstream) exits.push_back(a.id);
        ScheduledVehicle lead;
        lead.entry_arm = upstream;
        lead.speed = std::round((tr.circulating_speed + rng.uniform(-tr.speed_jitter, tr.speed_jitter)) * 100.0) / 100.0;
        std::vector<double> hits;
        for (int k = -300; k <= 0; ++k) {
          lead.spawn_time = static_cast<double>(nominal.entry) + 0.1 * k;
          const auto occ = occupied_seconds(geo, only(tr, lead), en_zone);
          if (std::find(occ.begin(), occ.end(), nominal.entry) != occ.end()) hits.push_back(lead.spawn_time);
        }
        if (hits.empty()) throw Error(ErrorCode::InvalidSpec, "cannot place an entry conflict");
        for (int n = 2; n <= 3; ++n)
          for (double hit : hits) {
            TrafficSpec c = tr;
            const double headway = std::round(rng.uniform(1.5, 2.0) * 10.0) / 10.0;
            for (int j = 0; j < n; ++j) {
              ScheduledVehicle v = lead;
              v.spawn_time = std::round((hit + headway * j) * 10.0) / 10.0;
              v.exit_arm = exits[rng.index(exits.size())];
              c.vehicles.push_back(v);
            }
            candidates.push_back(std::move(c));
          }
      }
      for (std::size_t k = candidates.size(); k > 1; --k) std::swap(candidates[k - 1], candidates[rng.index(k)]);
      bool placed = false;
      const int zone = vru ? cw_zone : en_zone;
      for (auto& c : candidates) {
        sc.traffic = c;
        TrafficSpec design = c;
        design.flows.clear();
        design.vehicles.erase(design.vehicles.begin(), design.vehicles.begin() + static_cast<std::ptrdiff_t>(tr.vehicles.size()));
        design.crossings.erase(design.crossings.begin(), design.crossings.begin() + static_cast<std::ptrdiff_t>(tr.crossings.size()));
        // the conflict must fit the prediction horizon
        if (static_cast<int>(occupied_seconds(geo, design, zone).size()) > config.horizon) continue;
        if (baseline_stops(geo, sc, config)) {
          placed = true;
          break;
        }
      }
      if (!placed) throw Error(ErrorCode::InvalidSpec, "cannot place a stopping conflict in " + sc.id);
    }
    suite.push_back(std::move(sc));
  }
  return suite;
}

ScenarioSpec to_scenario(const SuiteScenario& s, std::shared_ptr<const RoundaboutGeometry> geo) {
  ScenarioSpec spec;
  spec.id = s.id;
  spec.background = std::make_shared<FrameSeries>(generate_synthetic_scenario(*geo, s.traffic, s.seed));
  spec.geometry = std::move(geo);
  spec.ego = s.ego;
  return spec;
}

nlohmann::json to_json(const SuiteScenario& s) {
  return {{"id", s.id},
          {"design", std::string(to_string(s.design))},
          {"background", {{"synthetic", to_json(s.traffic)}, {"seed", s.seed}}},
          {"ego", to_json(s.ego)}};
}

void write_suite(const fs::path& dir, const std::vector<SuiteScenario>& suite) {
  fs::create_directories(dir);
  nlohmann::json names = nlohmann::json::array();
  for (const auto& s : suite) {
    const std::string name = s.id + ".json";
    std::ofstream out(dir / name);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + (dir / name).string());
    out << to_json(s).dump(2) << '\n';
    names.push_back(name);
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error(ErrorCode::IoError, "cannot write manifest in " + dir.string());
  out << nlohmann::json{{"scenarios", names}}.dump(2) << '\n';
}

}  // namespace rosa
