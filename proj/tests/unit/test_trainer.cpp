#include <gtest/gtest.h>

#include <cmath>

#include "scrnn/error.hpp"
#include "scrnn/synth.hpp"
#include "scrnn/trainer.hpp"
#include "test_util.hpp"

using namespace scrnn;

namespace {

TrainConfig small_config() {
  TrainConfig c;
  c.observed = 4;
  c.horizon = 3;
  c.batch_size = 3;
  c.epochs = 2;
  c.learning_rate = 0.01;
  c.window_stride = 3;
  c.seed = 11;
  return c;
}

std::vector<SkeletonSequence> small_data(std::size_t n = 3) {
  return synth_dataset(SynthKind::walk_like, 2, 16, n, 5);
}

}  // namespace

TEST(Windows, CountAndPlacement) {
  auto data = small_data(2);
  auto w = make_windows(data, 4, 3, 3);
  // starts 1, 4, 7, 10 fit 16 frames with length 7
  ASSERT_EQ(w.size(), 8u);
  EXPECT_EQ(w[3], (Window{0, 10}));
  EXPECT_EQ(w[4], (Window{1, 1}));
  EXPECT_EQ(make_windows(data, 10, 6, 100).size(), 2u);
  EXPECT_THROW(make_windows(data, 10, 7, 1), DataError);
  EXPECT_THROW(make_windows(data, 4, 3, 0), ParameterError);
}

TEST(Train, OneStepPerWindowWithBatchOne) {
  auto cfg = small_config();
  cfg.batch_size = 1;
  auto data = small_data();
  const auto n = make_windows(data, cfg.observed, cfg.horizon, cfg.window_stride).size();
  auto r = train(data, cfg);
  EXPECT_EQ(r.steps, static_cast<std::int64_t>(2 * n));
  EXPECT_EQ(r.history.size(), 2 * n);
  EXPECT_EQ(r.history.back().epoch, 2);
  EXPECT_NEAR(r.final_learning_rate, 0.01 * 0.95 * 0.95, 1e-17);
}

TEST(Train, ZeroLearningRateLeavesParamsUnchanged) {
  auto cfg = small_config();
  cfg.learning_rate = 0.0;
  auto r = train(small_data(), cfg);
  EXPECT_EQ(r.params, initialize_parameters(model_shape(cfg, 2), cfg.seed));
  for (const auto& h : r.history) EXPECT_GT(h.loss, 0.0);
}

TEST(Train, FirstStepIsMeanOfWindowGradients) {
  auto cfg = small_config();
  cfg.epochs = 1;
  cfg.batch_size = 1000;  // whole set in one batch
  cfg.momentum = 0.0;
  cfg.learning_rate = 1.0;
  cfg.clip_norm = 0.0;
  auto data = small_data();
  const auto p0 = initialize_parameters(model_shape(cfg, 2), cfg.seed);
  const auto windows = make_windows(data, cfg.observed, cfg.horizon, cfg.window_stride);
  const auto model = model_config(cfg, 2);
  auto mean = zeros_like(p0);
  double loss = 0;
  for (const auto& w : windows) {
    ParameterSet g;
    loss += window_loss(p0, model, cfg, data[w.sequence], w.start, &g);
    axpy(mean, 1.0 / static_cast<double>(windows.size()), g);
  }
  auto r = train(data, cfg);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_TRUE(testutil::close(r.history[0].loss, loss / static_cast<double>(windows.size()), 1e-12));
  auto expect = p0;
  axpy(expect, -1.0, mean);
  auto a = weight_list(r.params);
  auto b = weight_list(expect);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(max_abs_diff(*a[i], *b[i]), 1e-12);
}

TEST(Train, DeterministicAcrossRunsAndThreads) {
  auto cfg = small_config();
  auto data = small_data(4);
  auto a = train(data, cfg);
  auto b = train(data, cfg);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.history, b.history);
  cfg.threads = 3;
  auto c = train(data, cfg);
  EXPECT_EQ(a.params, c.params);
  EXPECT_EQ(a.history, c.history);
  cfg.deterministic = false;
  auto d = train(data, cfg);
  auto pa = weight_list(a.params);
  auto pd = weight_list(d.params);
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_LT(max_abs_diff(*pa[i], *pd[i]), 1e-10);
}

TEST(Train, SeedChangesShuffle) {
  auto cfg = small_config();
  auto data = small_data(4);
  auto a = train(data, cfg);
  cfg.seed = 12;
  const auto init = initialize_parameters(model_shape(small_config(), 2), 11);
  auto b = train(data, cfg, &init);
  EXPECT_NE(a.history, b.history);
}

TEST(Train, EpochCallbackAndCsv) {
  auto cfg = small_config();
  std::vector<int> epochs;
  auto r = train(small_data(), cfg, nullptr, [&](int e, double loss) {
    epochs.push_back(e);
    EXPECT_GT(loss, 0.0);
  });
  EXPECT_EQ(epochs, (std::vector<int>{1, 2}));
  const auto csv = history_to_csv(r.history);
  EXPECT_EQ(csv.rfind("epoch,step,loss\n1,1,", 0), 0u);
}

TEST(Train, NanParametersReportEpochAndStep) {
  auto cfg = small_config();
  auto p = initialize_parameters(model_shape(cfg, 2), 1);
  p.weights.gate.W_fh(0, 0) = std::nan("");
  try {
    train(small_data(), cfg, &p);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch 1, step 1"), std::string::npos) << e.what();
  }
}

TEST(Train, InputErrors) {
  auto cfg = small_config();
  EXPECT_THROW(train({}, cfg), DataError);
  std::vector<SkeletonSequence> mixed{synth_generate(SynthKind::sinusoid, 2, 16, 1),
                                      synth_generate(SynthKind::sinusoid, 3, 16, 1)};
  EXPECT_THROW(train(mixed, cfg), DataError);
  auto wrong = initialize_parameters(ModelShape{2, 5, 6, 6}, 1);
  EXPECT_THROW(train(small_data(), cfg, &wrong), ShapeError);
  cfg.epochs = -1;
  EXPECT_THROW(train(small_data(), cfg), ConfigError);
}

TEST(Split, KeepsOrderAndOneTrainingSequence) {
  auto data = small_data(8);
  auto [tr, va] = split_dataset(data, 0.25);
  EXPECT_EQ(tr.size(), 6u);
  EXPECT_EQ(va.front(), data[6]);
  auto [t1, v1] = split_dataset(small_data(1), 0.5);
  EXPECT_EQ(t1.size(), 1u);
  EXPECT_TRUE(v1.empty());
}

TEST(Evaluate, ZeroVelocityBaselineByHand) {
  auto cfg = small_config();
  auto data = small_data(2);
  auto p = initialize_parameters(model_shape(cfg, 2), 3);
  auto r = evaluate(p, cfg, data, {1, 2});
  const auto windows = make_windows(data, 4, 2, 3);
  EXPECT_EQ(r.windows, windows.size());
  double sum = 0;
  for (const auto& w : windows) {
    const auto& s = data[w.sequence];
    const auto& last = s.frame(w.start + 3);
    const auto& target = s.frame(w.start + 5);
    double sq = 0;
    for (std::size_t i = 0; i < last.size(); ++i) sq += (last[i] - target[i]) * (last[i] - target[i]);
    sum += std::sqrt(sq);
  }
  EXPECT_TRUE(testutil::close(r.zero_velocity[1], sum / static_cast<double>(windows.size()), 1e-13));
  for (double v : r.model) EXPECT_TRUE(std::isfinite(v));
}
