#include <gtest/gtest.h>

#include "scrnn/error.hpp"
#include "scrnn/gradcheck.hpp"
#include "test_util.hpp"

using namespace scrnn;

TEST(RelativeError, Floor) {
  EXPECT_EQ(relative_error(1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(relative_error(2.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(relative_error(1e-9, 0.0), 1e-3);
}

TEST(CheckGradients, LinearLossIsExact) {
  const ModelShape s{2, 3, 6, 4};
  const auto p = testutil::random_params(s, 1);
  testutil::Rng rng(2);
  const Matrix c = rng.matrix(6, 6);
  LossBuilder build = [&](ad::Tape& t, const ModelWeights<ad::Var>& w) {
    return ad::add(ad::sum(ad::mul(w.gate.W_fh, t.leaf(c))), ad::sum(w.skeleton_gru.b_z));
  };
  auto r = check_gradients(p, build, 1e-5);
  EXPECT_LT(r.max_rel_error, 1e-9);
  EXPECT_EQ(r.checked, p.scalar_count());
  EXPECT_TRUE(r.passed(1e-9));
}

TEST(CheckGradients, SamplingLimitsEntries) {
  const auto p = testutil::random_params(ModelShape{2, 3, 6, 4}, 1);
  LossBuilder build = [](ad::Tape&, const ModelWeights<ad::Var>& w) {
    return ad::sum(ad::mul(w.gate.W_fm, w.gate.W_fm));
  };
  auto r = check_gradients(p, build, 1e-5, 25, 3);
  EXPECT_EQ(r.checked, 25u);
  EXPECT_LT(r.max_rel_error, 1e-8);
}

TEST(GradCheck, FullModelPasses) {
  TrainConfig cfg;
  for (std::uint64_t seed : {1u, 2u}) {
    auto r = grad_check(cfg, seed);
    EXPECT_TRUE(r.passed(cfg.gradcheck.threshold)) << r.to_text(cfg.gradcheck.threshold);
    EXPECT_NE(r.to_text(1e-4).find("PASS"), std::string::npos);
  }
}

TEST(GradCheck, ProjectedHiddenAndCustomTraversalPass) {
  TrainConfig cfg;
  cfg.hidden_size = 5;
  cfg.attention_width = 3;
  cfg.traversal = "custom";
  cfg.traversal_order = {2, 1, 3, 1};
  cfg.gradcheck.sample = 150;
  auto r = grad_check(cfg, 4);
  EXPECT_TRUE(r.passed(1e-4)) << r.to_text(1e-4);
}

TEST(GradCheck, TamperedGradientFails) {
  TrainConfig cfg;
  auto r = grad_check(cfg, 1, [](ParameterSet& g) { g.weights.gate.W_fh(0, 0) += 1e-2; });
  EXPECT_FALSE(r.passed(cfg.gradcheck.threshold));
  EXPECT_NE(r.to_text(cfg.gradcheck.threshold).find("FAIL"), std::string::npos);
}
