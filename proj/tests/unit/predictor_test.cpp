#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "rosa/data/roundabout.hpp"
#include "rosa/data/synthetic.hpp"
#include "rosa/error.hpp"
#include "rosa/predictor/evaluation.hpp"
#include "rosa/predictor/gradcheck.hpp"
#include "rosa/predictor/mask.hpp"
#include "rosa/predictor/rollout.hpp"
#include "rosa/predictor/samples.hpp"
#include "rosa/predictor/serialize.hpp"
#include "rosa/predictor/train.hpp"

using namespace rosa;

namespace {

ModelConfig small_config(FeatureVariant variant) {
  ModelConfig c;
  c.features.variant = variant;
  c.norm = Normalizer::from_geometry(default_geometry());
  c.embed_dim = 8;
  c.embed_hidden = 8;
  c.heads = 2;
  c.ffn_hidden = 8;
  c.head_hidden = 8;
  c.layers = 1;
  c.epochs = 2;
  c.batch_size = 8;
  return c;
}

FrameSeries scene(std::uint64_t seed) {
  TrafficSpec spec;
  spec.duration = 30;
  spec.flows = {{0, 6.0}, {1, 6.0}, {2, 6.0}, {3, 6.0}};
  spec.crossings = {{0, 5, 4, 1}, {1, 12, 5, -1}};
  return generate_synthetic_scenario(default_geometry(), spec, seed);
}

AgentState agent(AgentId id, double x, double y, double v = 0.0, double theta = 0.0) {
  AgentState a;
  a.id = id;
  a.pos = {x, y};
  a.v = v;
  a.theta = theta;
  return a;
}

}  // namespace

TEST_CASE("mask: own history and same step only") {
  const auto m = build_attention_mask(2, 3);
  CHECK(m.tokens() == 6);
  CHECK(m.allowed(0, 2));   // agent 0, steps 0 -> 2
  CHECK(m.allowed(1, 4));   // (0,1) -> (1,1)
  CHECK_FALSE(m.allowed(0, 4));  // (0,0) -> (1,1)
  const auto p = build_attention_mask(2, 2, {true, false});
  CHECK_FALSE(p.allowed(0, 2));
  CHECK_FALSE(p.allowed(2, 2));
  CHECK(p.allowed(0, 1));
}

TEST_CASE("config validation") {
  auto c = small_config(FeatureVariant::Dynamics);
  c.heads = 3;  // does not divide embed_dim 8
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK(parse_variant("dynamics-exit") == FeatureVariant::DynamicsExit);
  CHECK(parse_variant("1") == FeatureVariant::PositionType);
  CHECK_THROWS(parse_variant("velocity"));
  const auto back = model_config_from_json(to_json(small_config(FeatureVariant::DynamicsExit)));
  CHECK(back.features.variant == FeatureVariant::DynamicsExit);
  CHECK(back.embed_dim == 8);
}

TEST_CASE("gradient check on a small model, all variants") {
  for (auto v : {FeatureVariant::PositionType, FeatureVariant::Dynamics, FeatureVariant::DynamicsExit}) {
    const auto cfg = small_config(v);
    auto samples = build_samples(scene(1), cfg);
    REQUIRE(samples.size() >= 3);
    samples.resize(3);
    const auto r = gradient_check(ModelParameters::initialize(cfg, 3), samples, 1e-5, 100, 1);
    CHECK(r.max_rel_error < 1e-4);
  }
  const auto cfg = small_config(FeatureVariant::Dynamics);
  CHECK_THROWS_AS(gradient_check(ModelParameters::initialize(cfg, 3), build_samples(scene(1), cfg), 1e-2), Error);
}

TEST_CASE("training is deterministic and parameters round-trip") {
  const auto cfg = small_config(FeatureVariant::Dynamics);
  const auto train_set = build_samples(scene(2), cfg);
  const auto val_set = build_samples(scene(3), cfg);
  const auto a = train(train_set, val_set, cfg);
  const auto b = train(train_set, val_set, cfg);
  CHECK(a.params.data() == b.params.data());
  CHECK(a.history.epochs.size() == 3);
  CHECK(a.history.epochs.back().val_loss < a.history.epochs.front().val_loss);

  const auto path = (std::filesystem::temp_directory_path() / "rosa_unit_params.bin").string();
  save_parameters(path, a.params);
  const auto back = load_parameters(path);
  std::filesystem::remove(path);
  CHECK(back.data() == a.params.data());
  CHECK(back.config().features.variant == FeatureVariant::Dynamics);
  CHECK_THROWS_AS(train({}, {}, cfg), Error);
}

TEST_CASE("constant velocity rollout") {
  ConstantVelocityPredictor cv;
  const std::vector<Frame> history{{0, {agent(1, 0, 0, 2.0, 0.0)}}, {1, {agent(1, 2, 0, 2.0, 0.0)}}};
  const auto out = cv.rollout(history, 3);
  REQUIRE(out.size() == 3);
  CHECK(out[0].t == 2);
  CHECK(out[2].agents[0].pos.x == doctest::Approx(8.0));
  CHECK(out[2].agents[0].pos.y == doctest::Approx(0.0));
}

TEST_CASE("oracle rollout replays the truth") {
  const auto s = scene(4);
  OraclePredictor oracle(s);
  const auto h = history_window(s, 10, 3);
  const auto out = oracle.rollout(h, 5);
  REQUIRE(out.size() == 5);
  CHECK(out[4].t == 15);
  CHECK(out[4].agents == s.at(15)->agents);
  CHECK_THROWS_AS(oracle.rollout(history_window(s, s.last_time() - 1, 3), 5), Error);
}

TEST_CASE("ADE and FDE by hand") {
  const std::vector<Frame> truth{{1, {agent(1, 0, 0)}}, {2, {agent(1, 0, 0)}}};
  const std::vector<Frame> pred{{1, {agent(1, 3, 4)}}, {2, {agent(1, 6, 8)}}};
  const auto r = ade_fde(pred, truth);
  CHECK(r.ade == doctest::Approx(7.5));
  CHECK(r.fde == doctest::Approx(10.0));
  REQUIRE(r.curve.size() == 2);
  CHECK(r.curve[0].ade == doctest::Approx(5.0));
  const std::vector<Frame> missing{{1, {}}, {2, {}}};
  CHECK_THROWS_AS(ade_fde(missing, truth), Error);
}

TEST_CASE("trained model rollout keeps agent identities") {
  const auto cfg = small_config(FeatureVariant::DynamicsExit);
  const auto s = scene(5);
  TransformerPredictor p(std::make_shared<const ModelParameters>(ModelParameters::initialize(cfg, 1)));
  const auto h = history_window(s, 12, cfg.history);
  const auto out = p.rollout(h, cfg.horizon);
  REQUIRE(out.size() == 5);
  CHECK(out[0].agents.size() == h.back().agents.size());
  for (const auto& f : out)
    for (const auto& a : f.agents) CHECK(std::isfinite(a.pos.x));
}
