#include <gtest/gtest.h>

#include "scrnn/config.hpp"
#include "scrnn/error.hpp"

using namespace scrnn;

namespace {

std::string config_error(const std::string& json) {
  try {
    parse_config(json);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, EmptyObjectGivesDefaults) {
  const auto c = parse_config("{}");
  EXPECT_EQ(c, TrainConfig{});
  EXPECT_EQ(c.observed, 20);
  EXPECT_EQ(c.horizon, 10);
  EXPECT_EQ(c.clip_norm, 5.0);
  EXPECT_EQ(c.horizons_ms, kStandardHorizonsMs);
}

TEST(Config, JsonRoundTrip) {
  auto c = parse_config(R"({"observed": 8, "variant": "no_sca", "rbf_tau": 0.5, "traversal": [2, 1, 2],
                            "synth": {"kind": "sinusoid", "joints": 2}, "joint_selection": [1, 2]})");
  EXPECT_EQ(c.variant, Variant::no_sca);
  EXPECT_FALSE(c.rbf_tau.median);
  EXPECT_EQ(c.rbf_tau.value, 0.5);
  EXPECT_EQ(c.traversal, "custom");
  EXPECT_EQ(c.traversal_order, (std::vector<int>{2, 1, 2}));
  EXPECT_EQ(c.synth.kind, SynthKind::sinusoid);
  EXPECT_EQ(parse_config(config_to_json(c)), c);
  EXPECT_EQ(parse_config(config_to_json(c, true)), c);
  EXPECT_EQ(config_to_json(c).find('\n'), std::string::npos);
}

TEST(Config, UnknownKeysListAllowedKeys) {
  const auto m = config_error(R"({"epochz": 3})");
  EXPECT_NE(m.find("'epochz'"), std::string::npos);
  EXPECT_NE(m.find("epochs"), std::string::npos);
  EXPECT_NE(config_error(R"({"synth": {"colour": 1}})").find("synth.colour"), std::string::npos);
}

TEST(Config, UnknownVariantListsAllFour) {
  const auto m = config_error(R"({"variant": "no_magic"})");
  EXPECT_NE(m.find("no_magic"), std::string::npos);
  for (const char* v : {"full", "no_sca", "no_skel_attn", "no_joint_attn"}) EXPECT_NE(m.find(v), std::string::npos) << v;
}

TEST(Config, BadValues) {
  EXPECT_NE(config_error("[1]").find("object"), std::string::npos);
  EXPECT_NE(config_error("{").find("JSON"), std::string::npos);
  EXPECT_NE(config_error(R"({"epochs": "many"})").find("wrong type"), std::string::npos);
  EXPECT_NE(config_error(R"({"traversal": "zigzag"})").find("traveling"), std::string::npos);
  EXPECT_NE(config_error(R"({"rbf_tau": -1})").find("rbf_tau"), std::string::npos);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, Overrides) {
  TrainConfig c;
  apply_override(c, "epochs=3");
  apply_override(c, "variant=no_joint_attn");
  apply_override(c, "synth.kind=sinusoid");
  apply_override(c, "learning_rate=0.25");
  EXPECT_EQ(c.epochs, 3);
  EXPECT_EQ(c.variant, Variant::no_joint_attn);
  EXPECT_EQ(c.synth.kind, SynthKind::sinusoid);
  EXPECT_EQ(c.learning_rate, 0.25);
  EXPECT_THROW(apply_override(c, "nonsense"), ConfigError);
  EXPECT_THROW(apply_override(c, "epochz=1"), ConfigError);
  EXPECT_THROW(apply_override(c, "synth.colour=1"), ConfigError);
  EXPECT_THROW(apply_override(c, "variant=no_magic"), ConfigError);
}

TEST(Config, Validate) {
  TrainConfig c;
  EXPECT_NO_THROW(validate(c));
  auto bad = [](auto mutate) {
    TrainConfig x;
    mutate(x);
    EXPECT_THROW(validate(x), ConfigError);
  };
  bad([](TrainConfig& x) { x.observed = 0; });
  bad([](TrainConfig& x) { x.decay_rate = 1.5; });
  bad([](TrainConfig& x) { x.momentum = 1.0; });
  bad([](TrainConfig& x) { x.tau2 = 0.0; });
  bad([](TrainConfig& x) { x.learning_rate = -1.0; });
  bad([](TrainConfig& x) { x.window_stride = 0; });
  bad([](TrainConfig& x) { x.validation_fraction = 1.0; });
}

TEST(Config, ModelShapeAndConfig) {
  TrainConfig c;
  c.observed = 6;
  const auto s = model_shape(c, 5);
  EXPECT_EQ(s, (ModelShape{5, 6, 15, 15}));
  c.hidden_size = 7;
  c.attention_width = 4;
  EXPECT_EQ(model_shape(c, 5), (ModelShape{5, 6, 7, 4}));
  c.traversal = "custom";
  c.traversal_order = {1, 2, 1};
  c.tau2 = 0.3;
  const auto m = model_config(c, 2);
  EXPECT_EQ(m.traversal.order, (std::vector<int>{1, 2, 1}));
  EXPECT_EQ(m.tau2, 0.3);
  EXPECT_THROW(model_config(c, 3), DataError);
}
