#include "doctest.h"
#include "rosa/error.hpp"
#include "rosa/metrics/report.hpp"
#include "rosa/metrics/trip_metrics.hpp"

using namespace rosa;

TEST_CASE("trip metrics: time, waiting, stops") {
  const auto m = speed_trace_metrics({10, 10, 0, 0, 5, 0.05, 5});
  CHECK(m.travel_time == doctest::Approx(6.0));
  CHECK(m.waiting_time == doctest::Approx(3.0));
  CHECK(m.stops == 2);
  CHECK(m.co2 == doctest::Approx(m.fuel * 2392.0));
  CHECK(speed_trace_metrics({0, 0, 0}).stops == 0);
}

TEST_CASE("ICE: idling burns the idle rate") {
  std::vector<double> idle10(11, 0.0), idle20(21, 0.0);
  const auto a = speed_trace_metrics(idle10);
  const auto b = speed_trace_metrics(idle20);
  CHECK(a.fuel > 0.0);
  CHECK(b.fuel == doctest::Approx(2.0 * a.fuel));
  CHECK(a.fuel == doctest::Approx(10 * 0.3e-3));
}

TEST_CASE("BEV: steady cruise by hand") {
  // (F_roll + c_aero v^2) v / eta_drive + aux, for 10 s at 10 m/s
  const double watts = (150.0 + 0.4 * 100.0) * 10.0 / 0.85 + 300.0;
  const auto m = speed_trace_metrics(std::vector<double>(11, 10.0));
  CHECK(m.bev_energy == doctest::Approx(watts * 10.0 / 3600.0));
}

TEST_CASE("BEV: regeneration recovers part of the braking") {
  const auto braking = speed_trace_metrics({10, 8, 6, 4, 2, 0});
  const auto coasting_off = speed_trace_metrics({10, 8, 6, 4, 2, 0}, [] {
    MetricsConfig c;
    c.bev.eta_regen = 0.0;
    return c;
  }());
  CHECK(braking.bev_energy < coasting_off.bev_energy);
  CHECK(braking.bev_energy >= 0.0);
}

TEST_CASE("aggregate: deltas per category") {
  TripMetrics base, adv;
  base.travel_time = 40;
  adv.travel_time = 42;
  base.stops = 1;
  adv.stops = 0;
  TripMetrics same;
  same.travel_time = 30;
  const auto r = aggregate({base, same}, {adv, same}, {true, false});
  CHECK(r.optimizable.scenarios == 1);
  CHECK(r.non_optimizable.scenarios == 1);
  CHECK(r.all.scenarios == 2);
  CHECK(*r.optimizable.metrics[0].delta_pct == doctest::Approx(5.0));
  CHECK(*r.optimizable.metrics[2].delta_pct == doctest::Approx(-100.0));
  CHECK(*r.non_optimizable.metrics[0].delta_pct == 0.0);
  CHECK(*r.non_optimizable.metrics[2].delta_pct == 0.0);  // 0 -> 0
  CHECK(*r.all.metrics[0].delta_pct == doctest::Approx(100.0 * (36.0 - 35.0) / 35.0));

  // new stops where there were none: undefined percentage
  TripMetrics stopped = same;
  stopped.stops = 1;
  const auto n = aggregate({same}, {stopped}, {false});
  CHECK_FALSE(n.non_optimizable.metrics[2].delta_pct.has_value());
  CHECK(to_json(n)["categories"]["non_optimizable"]["metrics"]["stops"]["delta_pct"] == "n/a");
}

TEST_CASE("aggregate: errors") {
  CHECK_THROWS_AS(aggregate({}, {}, {}), Error);
  CHECK_THROWS_AS(aggregate({TripMetrics{}}, {}, {true}), Error);
  CHECK_THROWS_AS(aggregate_logs({}), Error);
}

TEST_CASE("metrics config round-trip") {
  MetricsConfig c;
  c.stop_threshold = 0.5;
  c.bev.aux_w = 123.0;
  const auto back = metrics_config_from_json(to_json(c));
  CHECK(back.stop_threshold == 0.5);
  CHECK(back.bev.aux_w == 123.0);
}
