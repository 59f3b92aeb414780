#include "doctest.h"
#include "rosa/advisory/rosa.hpp"
#include "rosa/error.hpp"

using namespace rosa;

namespace {

AdvisoryInput input(double v, double d_c, double d_e) {
  AdvisoryInput in;
  in.v = v;
  in.d_c = d_c;
  in.d_e = d_e;
  in.crosswalk_zone = 0;
  in.entry_zone = 3;
  in.occupancy = OccupancyMatrix({0, 3}, 5, OccupancySource::Oracle);
  return in;
}

}  // namespace

TEST_CASE("time to arrival rounds up, exact quotients stay") {
  CHECK(*time_to_arrival(10.0, 5.0) == 2);
  CHECK(*time_to_arrival(10.0, 3.0) == 4);
  CHECK(*time_to_arrival(45.0, 15.0) == 3);
  CHECK(*time_to_arrival(0.1 * 3, 0.1 + 1e-12) == 3);
  CHECK(*time_to_arrival(0.0, 5.0) == 0);
  CHECK_FALSE(time_to_arrival(10.0, 0.05).has_value());
  CHECK_FALSE(time_to_arrival(10.0, 0.1).has_value());
  CHECK_THROWS_AS(time_to_arrival(-1.0, 5.0), Error);
}

TEST_CASE("optimal speed: 2d/t - v, clamped") {
  CHECK(optimal_speed(20.0, 3.0, 10.0) == doctest::Approx(40.0 / 3.0 - 10.0));
  CHECK(optimal_speed(1.0, 1.0, 10.0) == 0.0);
  CHECK(optimal_speed(100.0, 1.0, 0.0) == doctest::Approx(13.89));
  CHECK_THROWS_AS(optimal_speed(10.0, 0.0, 5.0), Error);
  CHECK_THROWS_AS(optimal_speed(-1.0, 2.0, 5.0), Error);
}

TEST_CASE("decel limit") {
  CHECK(apply_decel_limit(10.0, 0.0) == doctest::Approx(8.0));
  CHECK(apply_decel_limit(5.0, 13.0) == doctest::Approx(7.5));
  CHECK(apply_decel_limit(1.0, 0.0) == 0.0);
  CHECK(apply_decel_limit(13.0, 20.0) == doctest::Approx(13.89));
  CHECK(apply_decel_limit(6.0, 5.0) == doctest::Approx(5.0));
}

TEST_CASE("rosa step: silent beyond the horizon") {
  const auto out = rosa_step(input(10.0, 80.0, 88.0));
  CHECK(out.stage == AdvisoryStage::NotTriggered);
  CHECK_FALSE(out.advised_speed.has_value());
  CHECK_FALSE(rosa_step(input(0.0, 10.0, 18.0)).advised_speed.has_value());
}

TEST_CASE("rosa step: clear zones keep the current speed") {
  const auto out = rosa_step(input(10.0, 30.0, 38.0));
  CHECK(out.stage == AdvisoryStage::CrosswalkAndEntry);
  REQUIRE(out.advised_speed);
  CHECK(*out.advised_speed == doctest::Approx(10.0));
}

TEST_CASE("rosa step: occupied crosswalk delays arrival by one second") {
  auto in = input(10.0, 25.0, 45.0);  // t_c = 3, t_e = 5
  in.occupancy.set(0, 3, true);
  const auto out = rosa_step(in);
  REQUIRE(out.advised_speed);
  CHECK(*out.advised_speed == doctest::Approx(2.0 * 25.0 / 4.0 - 10.0));
  CHECK(out.rationale.front().occupied);
}

TEST_CASE("rosa step: occupied entry uses the entry distance") {
  auto in = input(10.0, 25.0, 33.0);  // t_c = 3, t_e = 4
  in.occupancy.set(1, 4, true);
  const auto out = rosa_step(in);
  REQUIRE(out.advised_speed);
  CHECK(*out.advised_speed == doctest::Approx(2.0 * 33.0 / 5.0 - 10.0));
  CHECK(out.stage == AdvisoryStage::CrosswalkAndEntry);
}

TEST_CASE("rosa step: after the crosswalk only the entry counts") {
  auto in = input(8.0, 0.0, 6.0);
  in.crosswalk_passed = true;
  in.occupancy.set(0, 1, true);
  const auto out = rosa_step(in);
  REQUIRE(out.advised_speed);
  CHECK(*out.advised_speed == doctest::Approx(8.0));
  CHECK(out.rationale.size() == 1);
  CHECK(out.rationale[0].kind == ZoneKind::Entry);
}

TEST_CASE("rosa step: horizon mismatch surfaces") {
  auto in = input(10.0, 25.0, 33.0);
  in.occupancy = OccupancyMatrix({0, 3}, 2, OccupancySource::Oracle);
  // arrival 3 > horizon 2 is treated as clear, not an error
  CHECK_FALSE(rosa_step(in).advised_speed.has_value());
}
