#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "rosa/data/csv.hpp"
#include "rosa/data/preprocess.hpp"
#include "rosa/data/roundabout.hpp"
#include "rosa/data/series_io.hpp"
#include "rosa/data/split.hpp"
#include "rosa/data/synthetic.hpp"
#include "rosa/error.hpp"

using namespace rosa;

namespace {

const char* kHeader = "OBJID,TIMESTAMP,CLASS,UTM_X,UTM_Y,V,ACC_TAN,ACC_LAT,UTM_ANGLE\n";

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("csv: missing column and malformed row are reported") {
  std::istringstream no_speed("OBJID,TIMESTAMP,CLASS,UTM_X,UTM_Y,ACC_TAN,ACC_LAT,UTM_ANGLE\n1,0,Car,0,0,0,0,0\n");
  CHECK(code_of([&] { parse_trajectory_file(no_speed, {}, 25.0); }) == ErrorCode::MissingColumn);

  std::istringstream bad(std::string(kHeader) + "1,0,Car,0,0,1,0,0,0\n1,0.04,Car,abc,0,1,0,0,0\n");
  try {
    parse_trajectory_file(bad, {}, 25.0);
    FAIL("expected MalformedRow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedRow);
    CHECK(std::string(e.what()).find('2') != std::string::npos);
  }

  std::istringstream empty(kHeader);
  CHECK(code_of([&] { parse_trajectory_file(empty, {}, 25.0); }) == ErrorCode::EmptyInput);
}

TEST_CASE("csv: agent class labels") {
  CHECK(parse_agent_class("Pedestrian") == AgentClass::VRU);
  CHECK(parse_agent_class("Bicycle") == AgentClass::VRU);
  CHECK(parse_agent_class("Car") == AgentClass::Vehicle);
  CHECK(parse_agent_class("Heavy Vehicle") == AgentClass::Vehicle);
}

TEST_CASE("downsample: window means of position and speed") {
  // 4 Hz source, agent moving 1 m per sample: windows {0..3}, {4..7}
  std::ostringstream csv;
  csv << kHeader;
  for (int k = 0; k < 8; ++k) csv << "7," << k * 0.25 << ",Car," << k << ",2," << k << ",0,0,0\n";
  std::istringstream in(csv.str());
  const auto raw = parse_trajectory_file(in, {}, 4.0);
  const auto series = downsample(raw, 4.0, 1.0);
  REQUIRE(series.frames.size() == 2);
  CHECK(series.frames[1].t - series.frames[0].t == 1);
  REQUIRE(series.frames[0].agents.size() == 1);
  CHECK(series.frames[0].agents[0].pos.x == doctest::Approx(1.5));
  CHECK(series.frames[1].agents[0].pos.x == doctest::Approx(5.5));
  CHECK(series.frames[1].agents[0].pos.y == doctest::Approx(2.0));
  CHECK(series.frames[1].agents[0].v == doctest::Approx(5.5));
}

TEST_CASE("downsample: heading is averaged on the circle") {
  std::ostringstream csv;
  csv << kHeader;
  const double pi = std::numbers::pi;
  const double th[] = {pi - 0.1, -pi + 0.1};
  for (int k = 0; k < 2; ++k) csv << "1," << k * 0.5 << ",Car,0,0,1,0,0," << th[k] << "\n";
  std::istringstream in(csv.str());
  const auto series = downsample(parse_trajectory_file(in, {}, 2.0), 2.0, 1.0);
  REQUIRE(series.frames.size() == 1);
  CHECK(std::abs(std::abs(series.frames[0].agents[0].theta) - pi) < 1e-9);
}

TEST_CASE("downsample: rates must divide") {
  std::istringstream in(std::string(kHeader) + "1,0,Car,0,0,1,0,0,0\n");
  const auto raw = parse_trajectory_file(in, {}, 25.0);
  CHECK(code_of([&] { downsample(raw, 25.0, 2.0); }) == ErrorCode::IncompatibleRates);
}

TEST_CASE("segments: non-overlapping, remainder dropped") {
  FrameSeries s;
  for (int t = 0; t < 25; ++t) s.frames.push_back({t, {}});
  const auto segs = segment_series(s, 10);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].frames.front().t == 0);
  CHECK(segs[1].frames.front().t == 10);
  CHECK(segs[1].frames.size() == 10);
}

TEST_CASE("split: sizes, disjointness, determinism") {
  std::vector<bool> flags(100);
  for (std::size_t i = 0; i < flags.size(); ++i) flags[i] = i % 3 == 0;
  const auto a = split_by_flags(flags, {}, 42);
  const auto b = split_by_flags(flags, {}, 42);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);
  CHECK(a.train.size() == 80);
  CHECK(a.val.size() == 10);
  CHECK(a.test.size() == 10);
  std::vector<int> seen(100, 0);
  for (const auto* part : {&a.train, &a.val, &a.test})
    for (auto i : *part) ++seen[i];
  for (int n : seen) CHECK(n == 1);
  CHECK(code_of([] { split_by_flags(std::vector<bool>(9), {}, 1); }) == ErrorCode::TooFewSegments);
  CHECK(code_of([] { split_by_flags(std::vector<bool>(20), {0.5, 0.5, 0.5}, 1); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("series and geometry round-trip") {
  const auto geo = default_geometry();
  TrafficSpec spec;
  spec.duration = 20;
  spec.flows = {{0, 6.0}, {2, 6.0}};
  spec.crossings = {{1, 5, 4, 1}};
  const auto series = generate_synthetic_scenario(geo, spec, 3);
  std::stringstream buf;
  write_series(buf, series);
  const auto back = read_series(buf);
  REQUIRE(back.frames.size() == series.frames.size());
  for (std::size_t k = 0; k < series.frames.size(); ++k) CHECK(back.frames[k].agents == series.frames[k].agents);

  std::stringstream g;
  write_geometry(g, geo);
  const auto geo2 = parse_geometry(g);
  CHECK(geo2.zones.size() == geo.zones.size());
  CHECK(geo2.circulating_radius == geo.circulating_radius);
}

TEST_CASE("synthetic: seeded and deterministic") {
  const auto geo = default_geometry();
  TrafficSpec spec;
  spec.duration = 30;
  spec.flows = {{0, 5.0}, {1, 5.0}, {3, 5.0}};
  const auto a = generate_synthetic_scenario(geo, spec, 11);
  const auto b = generate_synthetic_scenario(geo, spec, 11);
  const auto c = generate_synthetic_scenario(geo, spec, 12);
  std::ostringstream sa, sb, sc;
  write_series(sa, a);
  write_series(sb, b);
  write_series(sc, c);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str() != sc.str());
  CHECK(a.frames.size() == 30);
}

TEST_CASE("exit labels follow the final position") {
  const auto geo = default_geometry();
  FrameSeries s;
  AgentState a;
  a.id = 1;
  a.pos = {60.0, -1.5};  // far out on arm 0, outbound side
  s.frames.push_back({0, {a}});
  const auto labelled = infer_exit_labels(s, geo);
  CHECK(labelled.frames[0].agents[0].exit == 0);
}
