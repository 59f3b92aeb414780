#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "rosa/data/synthetic.hpp"
#include "rosa/error.hpp"
#include "rosa/sim/batch.hpp"
#include "rosa/sim/ego.hpp"
#include "rosa/sim/io.hpp"
#include "rosa/sim/suite.hpp"

using namespace rosa;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

ScenarioSpec scenario(const std::string& id, const TrafficSpec& traffic, std::uint64_t seed) {
  auto geo = std::make_shared<const RoundaboutGeometry>(default_geometry());
  ScenarioSpec s;
  s.id = id;
  s.geometry = geo;
  s.background = std::make_shared<const FrameSeries>(generate_synthetic_scenario(*geo, traffic, seed));
  return s;
}

/// Pedestrian on the ego crosswalk while the unadvised ego would reach it.
ScenarioSpec blocked_crosswalk() {
  const auto np = nominal_passage(default_geometry(), {}, {}, 100);
  TrafficSpec t;
  t.duration = 100;
  t.crossings = {{0, np.crosswalk - 2, 5, 1}};
  return scenario("blocked", t, 1);
}

std::string serialize(const TripLog& log) {
  std::ostringstream out;
  write_trip_log(out, log);
  return out.str();
}

}  // namespace

TEST_CASE("kinematic helpers by hand") {
  EgoParams p;
  // 8 -> 6 -> 4 -> 2 -> 0: 7 + 5 + 3 + 1 m
  CHECK(stop_position(0.0, 8.0, p, -kInf, kInf) == doctest::Approx(16.0));
  CHECK(stop_position(0.0, 8.0, p, -kInf, 10.0) == kInf);
  CHECK(travel_time(10.0, 5.0, 0.0, 5.0) == doctest::Approx(2.0));
  CHECK(travel_time(10.0, 0.0, 2.0, 100.0) == doctest::Approx(std::sqrt(10.0)));
  CHECK(travel_time(10.0, 0.0, 0.0, 0.0) == kInf);
  CHECK(*time_in_step(0.0, 2.0, 4.0, 3.0) == doctest::Approx(1.0));
  CHECK(*time_in_step(0.0, 2.0, 4.0, 1.25) == doctest::Approx(0.5));
  CHECK_FALSE(time_in_step(0.0, 2.0, 4.0, 3.5).has_value());
  CHECK(committed_floor(12.0, p) == doctest::Approx(10.0));
  CHECK(committed_floor(0.0, p) == doctest::Approx(1.5));
}

TEST_CASE("route: zones ordered along the approach") {
  const auto r = build_ego_route(default_geometry(), {});
  CHECK(r.crosswalk.begin < r.crosswalk.end);
  CHECK(r.crosswalk.end < r.s_entry);
  CHECK(r.entry.begin == doctest::Approx(r.s_entry));
  CHECK(r.s_entry - r.crosswalk.begin == doctest::Approx(8.0).epsilon(0.05));
  EgoRouteSpec bad;
  bad.crosswalk_zone = 1;
  CHECK_THROWS_AS(build_ego_route(default_geometry(), bad), Error);
}

TEST_CASE("empty background: no stop, actuator limits respected") {
  TrafficSpec t;
  t.duration = 100;
  const auto log = run_scenario(scenario("empty", t, 1), {PredictorMode::GroundTruth, nullptr});
  CHECK_FALSE(log.conflict);
  REQUIRE(log.records.size() > 10);
  for (std::size_t k = 1; k < log.records.size(); ++k) {
    const double dv = log.records[k].v - log.records[k - 1].v;
    CHECK(dv >= -2.0 - 1e-9);
    CHECK(dv <= 2.5 + 1e-9);
    CHECK(log.records[k].v > 0.1);
    CHECK(log.records[k].s >= log.records[k - 1].s);
  }
  REQUIRE(log.trigger_d_c);
  CHECK(*log.trigger_d_c == doctest::Approx(45.6).epsilon(0.05));
}

TEST_CASE("blocked crosswalk: baseline stops, perfect foresight does not") {
  const auto spec = blocked_crosswalk();
  CHECK(classify_optimizable(spec));
  const auto base = run_scenario(spec, {PredictorMode::None, nullptr});
  const auto adv = run_scenario(spec, {PredictorMode::GroundTruth, nullptr});
  CHECK(base.conflict);
  auto stops = [](const TripLog& l) {
    int n = 0;
    for (std::size_t k = 1; k < l.records.size(); ++k) n += l.records[k - 1].v >= 0.1 && l.records[k].v < 0.1;
    return n;
  };
  CHECK(stops(base) >= 1);
  CHECK(stops(adv) == 0);
  CHECK(check_safety(base, spec).total() == 0);
  CHECK(check_safety(adv, spec).total() == 0);
}

TEST_CASE("batch: order and thread count do not change results") {
  const auto suite = make_suite(default_geometry(), {6, 0.5, 9, 100, 8, 10});
  auto geo = std::make_shared<const RoundaboutGeometry>(default_geometry());
  std::vector<ScenarioSpec> specs;
  for (const auto& s : suite) specs.push_back(to_scenario(s, geo));
  const auto a = run_batch(specs, {PredictorMode::GroundTruth, nullptr}, {}, 1);
  const auto b = run_batch(specs, {PredictorMode::GroundTruth, nullptr}, {}, 3);
  REQUIRE(a.size() == specs.size());
  int designed = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].ok());
    CHECK(a[i].id == specs[i].id);
    CHECK(serialize(*a[i].advised) == serialize(*b[i].advised));
    CHECK(a[i].baseline->optimizable == (suite[i].design != ConflictDesign::None));
    designed += suite[i].design != ConflictDesign::None;
  }
  CHECK(designed == 3);
}

TEST_CASE("batch: failures are recorded, the rest still runs") {
  TrafficSpec t;
  t.duration = 5;  // ends long before the ego arrives
  std::vector<ScenarioSpec> specs{scenario("short", t, 1), blocked_crosswalk()};
  const auto r = run_batch(specs, {PredictorMode::GroundTruth, nullptr}, {}, 2);
  CHECK_FALSE(r[0].ok());
  CHECK(r[0].error_code == "BackgroundExhausted");
  CHECK(r[1].ok());
}

TEST_CASE("trip log round-trip") {
  const auto log = run_scenario(blocked_crosswalk(), {PredictorMode::GroundTruth, nullptr});
  std::stringstream buf;
  write_trip_log(buf, log);
  write_trip_log(buf, log);
  const auto back = read_trip_logs(buf);
  REQUIRE(back.size() == 2);
  CHECK(serialize(back[1]) == serialize(log));
  std::istringstream junk("{\"format\":\"other\"}\n");
  CHECK_THROWS_AS(read_trip_log(junk), Error);
}

TEST_CASE("suite: designed share and reproducibility") {
  SuiteOptions o;
  o.count = 10;
  o.optimizable_fraction = 0.3;
  const auto a = make_suite(default_geometry(), o);
  const auto b = make_suite(default_geometry(), o);
  int designed = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(to_json(a[i]) == to_json(b[i]));
    designed += a[i].design != ConflictDesign::None;
  }
  CHECK(designed == 3);
  CHECK_THROWS_AS(suite_options_from_json({{"optimizable_fraction", 1.5}}), Error);
}
