#include <benchmark/benchmark.h>

#include <random>

#include "scrnn/config.hpp"
#include "scrnn/sc_gru.hpp"
#include "scrnn/synth.hpp"
#include "scrnn/trainer.hpp"

using namespace scrnn;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(r, c);
  for (double& v : m.data()) v = u(gen);
  return m;
}

TrainConfig bench_config(int joints) {
  TrainConfig cfg;
  cfg.synth.joints = joints;
  cfg.synth.kind = SynthKind::walk_like;
  return cfg;
}

}  // namespace

static void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n, n, 1), b = random_matrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Matmul)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oNCubed);

static void BM_StepForward(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const TrainConfig cfg = bench_config(K);
  const auto params = initialize_parameters(model_shape(cfg, K), 3);
  const auto model = model_config(cfg, K);
  const auto seq = synth_generate(SynthKind::walk_like, K, static_cast<std::size_t>(cfg.observed), 5);
  const auto F = build_feature_map(seq);
  const auto st = initial_state(F, params, model);
  for (auto _ : state) benchmark::DoNotOptimize(sc_gru_step(F, st, params, model).x_next);
}
BENCHMARK(BM_StepForward)->Arg(4)->Arg(8)->Arg(17);

static void BM_WindowForwardBackward(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const TrainConfig cfg = bench_config(K);
  const auto params = initialize_parameters(model_shape(cfg, K), 3);
  const auto model = model_config(cfg, K);
  const auto seq =
      synth_generate(SynthKind::walk_like, K, static_cast<std::size_t>(cfg.observed + cfg.horizon), 5);
  auto grads = zeros_like(params);
  for (auto _ : state) benchmark::DoNotOptimize(window_loss(params, model, cfg, seq, 1, &grads));
}
BENCHMARK(BM_WindowForwardBackward)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
