#include <gtest/gtest.h>

#include <cmath>

#include "scrnn/error.hpp"
#include "scrnn/optimizer.hpp"
#include "test_util.hpp"

using namespace scrnn;

namespace {

const ModelShape kShape{2, 3, 6, 4};

}  // namespace

TEST(Sgd, PlainStepWithGradientEqualToParamsReachesZero) {
  auto p = testutil::random_params(kShape, 1);
  auto st = make_optimizer(p, 1.0, 0.95, 0.0);
  const auto g = p;
  sgd_momentum_step(p, g, st);
  for (const Matrix* m : weight_list(p))
    for (double v : m->data()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(st.step, 1);
}

TEST(Sgd, ZeroGradientWithoutVelocityIsNoOp) {
  auto p = testutil::random_params(kShape, 2);
  const auto before = p;
  auto st = make_optimizer(p, 0.1, 0.95, 0.9);
  for (int i = 0; i < 3; ++i) sgd_momentum_step(p, zeros_like(p), st);
  EXPECT_EQ(p, before);
}

TEST(Sgd, MomentumRecursionMatchesScalarLoop) {
  // quadratic bowl: g = p
  auto p = testutil::random_params(kShape, 3);
  const double lr = 0.1, mu = 0.8;
  std::vector<double> ref_p, ref_v;
  for (const Matrix* m : weight_list(p))
    for (double v : m->data()) ref_p.push_back(v);
  ref_v.assign(ref_p.size(), 0.0);
  auto st = make_optimizer(p, lr, 1.0, mu);
  for (int step = 0; step < 25; ++step) {
    const auto g = p;
    sgd_momentum_step(p, g, st);
    for (std::size_t i = 0; i < ref_p.size(); ++i) {
      ref_v[i] = mu * ref_v[i] - lr * ref_p[i];
      ref_p[i] += ref_v[i];
    }
  }
  std::size_t i = 0;
  for (const Matrix* m : weight_list(p))
    for (double v : m->data()) EXPECT_EQ(v, ref_p[i++]);
}

TEST(Sgd, DecayPerEpoch) {
  auto p = initialize_parameters(kShape, 1);
  auto st = make_optimizer(p, 0.5e-3, 0.95, 0.9);
  double expect = 0.5e-3;
  for (int e = 0; e < 40; ++e) {
    end_epoch(st);
    expect *= 0.95;
  }
  EXPECT_EQ(st.epoch, 40);
  EXPECT_DOUBLE_EQ(st.learning_rate, 0.5e-3 * std::pow(0.95, 40));
  EXPECT_EQ(st.learning_rate, expect);
}

TEST(Sgd, Errors) {
  auto p = initialize_parameters(kShape, 1);
  EXPECT_THROW(make_optimizer(p, -1.0, 0.95, 0.9), ParameterError);
  auto st = make_optimizer(p, 0.1, 0.95, 0.9);
  auto other = initialize_parameters(ModelShape{3, 3, 9, 4}, 1);
  EXPECT_THROW(sgd_momentum_step(p, other, st), ShapeError);
}

TEST(Clip, GlobalNorm) {
  auto g = testutil::random_params(kShape, 4);
  double sq = 0;
  for (const Matrix* m : weight_list(g))
    for (double v : m->data()) sq += v * v;
  EXPECT_TRUE(testutil::close(global_norm(g), std::sqrt(sq), 1e-14));

  const auto orig = g;
  const double n = clip_global_norm(g, 1e6);
  EXPECT_EQ(g, orig);
  EXPECT_TRUE(testutil::close(n, std::sqrt(sq), 1e-14));
  clip_global_norm(g, 0.5);
  EXPECT_NEAR(global_norm(g), 0.5, 1e-12);

  auto bad = orig;
  bad.weights.gate.b_h(0, 0) = std::nan("");
  EXPECT_THROW(clip_global_norm(bad, 1.0), NumericError);
}

TEST(Axpy, Accumulates) {
  auto a = testutil::random_params(kShape, 5);
  const auto b = testutil::random_params(kShape, 6);
  const auto a0 = a;
  axpy(a, 2.0, b);
  EXPECT_EQ(a.weights.gate.W_fh(1, 2), a0.weights.gate.W_fh(1, 2) + 2.0 * b.weights.gate.W_fh(1, 2));
}
