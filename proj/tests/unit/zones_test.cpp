#include <cmath>

#include "doctest.h"
#include "rosa/data/roundabout.hpp"
#include "rosa/error.hpp"
#include "rosa/zones/occupancy.hpp"
#include "rosa/zones/zone.hpp"

using namespace rosa;

TEST_CASE("point in polygon: square, edges, concave") {
  const std::vector<Vec2> sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK(point_in_polygon({1, 1}, sq));
  CHECK(point_in_polygon({2, 1}, sq));  // on an edge
  CHECK(point_in_polygon({0, 0}, sq));  // on a vertex
  CHECK_FALSE(point_in_polygon({3, 1}, sq));
  CHECK_FALSE(point_in_polygon({-0.001, 1}, sq));
  // U shape: the notch is outside
  const std::vector<Vec2> u{{0, 0}, {3, 0}, {3, 3}, {2, 3}, {2, 1}, {1, 1}, {1, 3}, {0, 3}};
  CHECK(point_in_polygon({0.5, 2}, u));
  CHECK_FALSE(point_in_polygon({1.5, 2}, u));
  CHECK(signed_area(sq) == doctest::Approx(4.0));
}

TEST_CASE("zone validation") {
  ConflictZone z;
  z.polygon = {{0, 0}, {1, 0}};
  CHECK_THROWS_AS(validate_zone(z), Error);
  z.polygon = {{0, 0}, {1, 1}, {2, 2}};
  CHECK_THROWS_AS(validate_zone(z), Error);
}

TEST_CASE("default layout: crosswalk and entry membership") {
  const auto geo = default_geometry();
  const auto& cw = geo.zones[0];
  const auto& en = geo.zones[3];
  REQUIRE(cw.kind == ZoneKind::Crosswalk);
  REQUIRE(en.kind == ZoneKind::Entry);
  // arm 0 points along +x; crosswalk spans radial 21..25, lateral +-3
  CHECK(point_in_zone({23.0, 0.0}, cw));
  CHECK(point_in_zone({23.0, 2.9}, cw));
  CHECK_FALSE(point_in_zone({26.0, 0.0}, cw));
  CHECK_FALSE(point_in_zone({23.0, 3.5}, cw));
  // entry sector [-60 deg, 0] over radii 12..17
  CHECK(point_in_zone({14.5 * std::cos(-0.5), 14.5 * std::sin(-0.5)}, en));
  CHECK_FALSE(point_in_zone({14.5 * std::cos(0.5), 14.5 * std::sin(0.5)}, en));
  CHECK_FALSE(point_in_zone({0.0, 0.0}, en));
}

TEST_CASE("occupancy: class filter") {
  const auto geo = default_geometry();
  AgentState ped;
  ped.cls = AgentClass::VRU;
  ped.pos = {23.0, 0.0};
  AgentState car;
  car.id = 2;
  car.pos = {23.0, 0.0};
  auto occ = occupancy_from_frame({car}, geo.zones);
  CHECK_FALSE(occ[0]);
  occ = occupancy_from_frame({ped}, geo.zones);
  CHECK(occ[0]);
  car.pos = {14.5 * std::cos(-0.5), 14.5 * std::sin(-0.5)};
  ped.pos = car.pos;
  CHECK(occupancy_from_frame({car}, geo.zones)[3]);
  CHECK_FALSE(occupancy_from_frame({ped}, geo.zones)[3]);
}

TEST_CASE("occupancy matrix and metrics") {
  OccupancyMatrix m({0, 3}, 2, OccupancySource::Predicted);
  m.set(0, 2, true);
  CHECK(m.occupied(0, 2));
  CHECK_FALSE(m.occupied(3, 2));
  CHECK_THROWS_AS(m.occupied(0, 3), Error);
  CHECK_THROWS_AS(m.occupied(9, 1), Error);

  OccupancyMatrix truth({0, 3}, 2, OccupancySource::GroundTruth);
  truth.set(0, 2, true);
  truth.set(1, 2, true);
  const auto r = occupancy_metrics({m}, {truth}, 2);
  CHECK(r.tp == 1);
  CHECK(r.fn == 1);
  CHECK(r.fp == 0);
  CHECK(r.precision == doctest::Approx(1.0));
  CHECK(r.recall == doctest::Approx(0.5));
  CHECK_THROWS_AS(occupancy_metrics({m, m}, {truth}, 1), Error);
}
