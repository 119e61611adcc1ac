#include <gtest/gtest.h>

#include <algorithm>

#include "scrnn/error.hpp"
#include "scrnn/sc_gru.hpp"
#include "scrnn/synth.hpp"
#include "test_util.hpp"

using namespace scrnn;
using testutil::max_rel_diff;

namespace {

struct Case {
  ParameterSet params;
  ModelConfig cfg;
  FeatureMap F;
};

Case make_case(std::uint64_t seed, int K, int T, int hidden, std::vector<int> order = {}) {
  testutil::Rng rng(seed);
  const ModelShape shape{K, T, hidden, rng.integer(2, 6)};
  Case c{testutil::random_params(shape, seed), {}, {}};
  c.cfg.tau1 = rng.uniform(0.5, 2.0);
  c.cfg.tau2 = rng.uniform(0.5, 2.0);
  c.cfg.rho = rng.uniform(0.5, 2.0);
  c.cfg.traversal = order.empty() ? builtin_traversal("id", K) : custom_traversal(order, K);
  const auto seq = synth_generate(SynthKind::sinusoid, K, static_cast<std::size_t>(std::max(T, 4)), seed);
  c.F = build_feature_map(seq, 1, static_cast<std::size_t>(T));
  return c;
}

void expect_step_matches(const Case& c, const oracle::Factors& factors, const StepOverride* ov) {
  testutil::Rng rng(99);
  const auto d = c.F.dim();
  ScGruState st{rng.matrix(static_cast<std::size_t>(c.params.shape.hidden), 1), {}, rng.matrix(d, 1)};
  auto got = sc_gru_step(c.F, st, c.params, c.cfg, ov);
  auto want = oracle::sc_gru_step(oracle::from(c.params), c.cfg.tau1, c.cfg.tau2, c.cfg.rho,
                                  c.cfg.traversal.order, oracle::from(c.F.matrix), oracle::flat(st.x_tilde),
                                  oracle::flat(st.h), factors);
  EXPECT_LT(max_rel_diff(got.x_next, want.x_next), 1e-11);
  EXPECT_LT(max_rel_diff(got.state.h, want.h), 1e-11);
  ASSERT_EQ(got.state.Q.size(), want.Q.size());
  for (std::size_t k = 0; k < want.Q.size(); ++k) EXPECT_LT(max_rel_diff(got.state.Q[k], want.Q[k]), 1e-11);
}

}  // namespace

TEST(ScGruStep, MatchesOracle) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    testutil::Rng rng(seed + 500);
    const int K = rng.integer(2, 4);
    const int hidden = (seed % 2) ? 3 * K : rng.integer(2, 7);
    expect_step_matches(make_case(seed, K, rng.integer(2, 5), hidden), {}, nullptr);
  }
}

TEST(ScGruStep, RepeatedTraversalMatchesOracle) {
  expect_step_matches(make_case(3, 4, 3, 12, {2, 1, 3, 1, 4}), {}, nullptr);
  expect_step_matches(make_case(4, 3, 4, 5, {3, 3, 1, 2, 1}), {}, nullptr);
}

TEST(ScGruStep, OverrideFactorsMatchOracle) {
  auto c = make_case(8, 3, 4, 9);
  testutil::Rng rng(8);
  StepOverride ov;
  ov.skeleton = rng.matrix(1, 4);
  oracle::Factors f;
  f.skeleton = oracle::flat(*ov.skeleton);
  for (int k = 1; k <= 3; ++k) {
    ov.joint[k] = rng.matrix(2, 1);
    f.joint[k] = oracle::flat(ov.joint[k]);
  }
  expect_step_matches(c, f, &ov);
}

TEST(ScGruStep, UnitOverrideEqualsAblationBitwise) {
  auto c = make_case(9, 4, 3, 12);
  StepOverride ov;
  ov.skeleton = Matrix(1, 3, 1.0);
  for (int k = 1; k <= 4; ++k) ov.joint[k] = Matrix(3, 1, 1.0);
  testutil::Rng rng(1);
  ScGruState st{rng.matrix(12, 1), {}, rng.matrix(12, 1)};
  auto forced = sc_gru_step(c.F, st, c.params, c.cfg, &ov);
  c.cfg.variant = Variant::no_sca;
  auto ablated = sc_gru_step(c.F, st, c.params, c.cfg);
  EXPECT_EQ(forced.x_next, ablated.x_next);
  EXPECT_EQ(forced.state.h, ablated.state.h);
}

TEST(ScGruStep, TraceRecordsFactors) {
  auto c = make_case(10, 3, 4, 9);
  ScGruState st = initial_state(c.F, c.params, c.cfg);
  StepTrace tr;
  sc_gru_step(c.F, st, c.params, c.cfg, nullptr, &tr);
  double total = 0;
  for (double v : tr.skeleton_alphas.data()) total += v;
  EXPECT_NEAR(total, 1.0, 1e-14);
  EXPECT_EQ(tr.joint_alphas.size(), 3u);
  EXPECT_EQ(tr.gamma.rows(), 9u);
}

TEST(Rollout, MatchesOracleForEveryVariant) {
  for (Variant v : {Variant::full, Variant::no_sca, Variant::no_skel_attn, Variant::no_joint_attn}) {
    for (std::uint64_t seed = 30; seed < 34; ++seed) {
      auto c = make_case(seed, 3, 4, seed % 2 ? 9 : 5);
      c.cfg.variant = v;
      c.cfg.init = seed == 33 ? InitMode::zero : InitMode::encoder;
      ad::Tape t;
      auto w = bind(t, c.params);
      auto preds = rollout(w, c.cfg, t.leaf(c.F.matrix), 4);
      auto want = oracle::rollout(oracle::from(c.params), c.cfg.tau1, c.cfg.tau2, c.cfg.rho, c.cfg.traversal.order,
                                  c.cfg.init == InitMode::encoder, oracle::from(c.F.matrix), 4,
                                  forces_skeleton_factors(v), forces_joint_factors(v));
      ASSERT_EQ(preds.size(), 4u);
      for (std::size_t i = 0; i < 4; ++i)
        EXPECT_LT(max_rel_diff(preds[i].value(), want[i]), 1e-10) << to_string(v) << " step " << i + 1;
    }
  }
}

TEST(Rollout, ValueInterfaceUsesLastObservedFrames) {
  auto c = make_case(40, 2, 3, 6);
  const auto seq = synth_generate(SynthKind::walk_like, 2, 8, 40);
  auto pred = rollout(seq, 2, c.params, c.cfg);
  EXPECT_EQ(pred.length(), 2u);
  auto tail = rollout(seq.slice(6, 3), 2, c.params, c.cfg);
  EXPECT_EQ(pred, tail);
}

TEST(Rollout, Errors) {
  auto c = make_case(41, 2, 3, 6);
  EXPECT_THROW(rollout(synth_generate(SynthKind::sinusoid, 3, 5, 1), 2, c.params, c.cfg), ShapeError);
  EXPECT_THROW(rollout(synth_generate(SynthKind::sinusoid, 2, 5, 1).slice(1, 2), 2, c.params, c.cfg), DataError);
  EXPECT_THROW(rollout(synth_generate(SynthKind::sinusoid, 2, 5, 1), 0, c.params, c.cfg), ArgumentError);
  auto other = make_case(41, 2, 4, 6);
  ScGruState st{Matrix(6, 1), {}, Matrix(6, 1)};
  EXPECT_THROW(sc_gru_step(other.F, st, c.params, c.cfg), ShapeError);
  EXPECT_THROW(parse_variant("no_magic"), ConfigError);
  EXPECT_EQ(parse_init_mode("zero"), InitMode::zero);
}
