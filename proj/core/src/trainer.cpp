#include "scrnn/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "scrnn/error.hpp"
#include "scrnn/loss.hpp"
#include "scrnn/metrics.hpp"
#include "scrnn/sc_gru.hpp"

namespace scrnn {

std::vector<Window> make_windows(const std::vector<SkeletonSequence>& data, int observed, int horizon,
                                 int stride) {
  if (observed < 1 || horizon < 1 || stride < 1) {
    throw ParameterError("window sizes and stride must be >= 1");
  }
  const auto len = static_cast<std::size_t>(observed + horizon);
  std::vector<Window> out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t n = data[i].length();
    if (n < len) {
      throw DataError("sequence " + std::to_string(i + 1) + " has " + std::to_string(n) +
                      " frames, need at least " + std::to_string(len) + " (observed + horizon)");
    }
    for (std::size_t s = 1; s + len - 1 <= n; s += static_cast<std::size_t>(stride)) out.push_back({i, s});
  }
  return out;
}

std::string history_to_csv(const std::vector<LossRecord>& history) {
  std::string out = "epoch,step,loss\n";
  char buf[96];
  for (const auto& r : history) {
    std::snprintf(buf, sizeof buf, "%d,%lld,%.17g\n", r.epoch, static_cast<long long>(r.step), r.loss);
    out += buf;
  }
  return out;
}

double window_loss(const ParameterSet& params, const ModelConfig& model, const TrainConfig& cfg,
                   const SkeletonSequence& seq, std::size_t start, ParameterSet* grads) {
  const auto T = static_cast<std::size_t>(cfg.observed);
  const auto H = static_cast<std::size_t>(cfg.horizon);
  if (start < 1 || start + T + H - 1 > seq.length()) {
    throw DataError("window at frame " + std::to_string(start) + " runs past a sequence of " +
                    std::to_string(seq.length()) + " frames");
  }
  const FeatureMap F = build_feature_map(seq, start, start + T - 1);
  std::vector<Matrix> truth;
  truth.reserve(H);
  for (std::size_t t = 0; t < H; ++t) truth.push_back(Matrix::column(seq.frame(start + T + t)));

  ad::Tape tape;
  const auto w = bind(tape, params);
  const auto preds = rollout(w, model, tape.leaf(F.matrix), cfg.horizon);
  ad::Var loss;
  if (cfg.loss == LossKind::gram) {
    const double tau = cfg.rbf_tau.median ? median_pairwise_distance(truth) : cfg.rbf_tau.value;
    const double divisor = cfg.loss_normalization == LossNormalization::horizon ? static_cast<double>(H)
                                                                                 : static_cast<double>(T);
    loss = gram_loss(preds, truth, coefficient_matrix(truth, tau), divisor);
  } else {
    loss = mse_loss(preds, truth);
  }
  if (grads) *grads = collect_gradients(ad::backward(tape, loss), w, params);
  return loss.value()[0];
}

namespace {

struct WindowResult {
  double loss = 0.0;
  ParameterSet grads;
};

std::string where(int epoch, std::int64_t step, const Window& w) {
  return "epoch " + std::to_string(epoch) + ", step " + std::to_string(step) + " (sequence " +
         std::to_string(w.sequence + 1) + ", window at frame " + std::to_string(w.start) + ")";
}

}  // namespace

TrainResult train(const std::vector<SkeletonSequence>& data, const TrainConfig& cfg,
                  const ParameterSet* init, const EpochCallback& on_epoch) {
  validate(cfg);
  if (data.empty()) throw DataError("training set is empty");
  const int K = data.front().joints();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].joints() != K) {
      throw DataError("sequence " + std::to_string(i + 1) + " has " + std::to_string(data[i].joints()) +
                      " joints, sequence 1 has " + std::to_string(K));
    }
  }
  const ModelConfig model = model_config(cfg, K);
  const ModelShape shape = model_shape(cfg, K);

  TrainResult result;
  if (init) {
    if (!(init->shape == shape)) throw ShapeError("initial parameters do not match the configured model shape");
    result.params = *init;
  } else {
    result.params = initialize_parameters(shape, cfg.seed);
  }
  ParameterSet& params = result.params;

  const auto windows = make_windows(data, cfg.observed, cfg.horizon, cfg.window_stride);
  OptimizerState opt = make_optimizer(params, cfg.learning_rate, cfg.decay_rate, cfg.momentum);
  std::mt19937_64 rng(cfg.seed ^ 0x5c5a11ab1eULL);
  std::vector<std::size_t> order(windows.size());
  const auto B = static_cast<std::size_t>(cfg.batch_size);
  const auto threads = static_cast<std::size_t>(cfg.threads);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;

    for (std::size_t first = 0; first < order.size(); first += B) {
      const std::size_t count = std::min(B, order.size() - first);
      const std::int64_t step = opt.step + 1;
      ParameterSet grad = zeros_like(params);
      double loss_sum = 0.0;

      auto run = [&](std::size_t j, WindowResult& out) {
        const Window& w = windows[order[first + j]];
        try {
          out.loss = window_loss(params, model, cfg, data[w.sequence], w.start, &out.grads);
        } catch (const NumericError& e) {
          throw NumericError("training diverged at " + where(epoch, step, w) + ": " + e.what());
        }
        if (!std::isfinite(out.loss)) throw NumericError("loss is NaN at " + where(epoch, step, w));
      };

      if (threads <= 1 || count == 1) {
        WindowResult r;
        for (std::size_t j = 0; j < count; ++j) {
          run(j, r);
          loss_sum += r.loss;
          axpy(grad, 1.0, r.grads);
        }
      } else {
        std::vector<WindowResult> slots(cfg.deterministic ? count : 0);
        std::atomic<std::size_t> next{0};
        std::mutex mu;
        std::exception_ptr failure;
        auto worker = [&] {
          WindowResult local;
          while (true) {
            const std::size_t j = next.fetch_add(1);
            if (j >= count) return;
            try {
              WindowResult& r = cfg.deterministic ? slots[j] : local;
              run(j, r);
              if (!cfg.deterministic) {
                std::lock_guard lock(mu);
                loss_sum += r.loss;
                axpy(grad, 1.0, r.grads);
              }
            } catch (...) {
              std::lock_guard lock(mu);
              if (!failure) failure = std::current_exception();
              next = count;
              return;
            }
          }
        };
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
        for (const auto& r : slots) {
          loss_sum += r.loss;
          axpy(grad, 1.0, r.grads);
        }
      }

      const double inv = 1.0 / static_cast<double>(count);
      for (Matrix* m : weight_list(grad)) *m *= inv;
      const double loss = loss_sum * inv;
      try {
        clip_global_norm(grad, cfg.clip_norm);
      } catch (const NumericError& e) {
        throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", step " +
                           std::to_string(step) + ": " + e.what());
      }
      sgd_momentum_step(params, grad, opt);
      result.history.push_back({epoch, step, loss});
      epoch_loss += loss;
      ++batches;
    }
    if (on_epoch) on_epoch(epoch, batches ? epoch_loss / static_cast<double>(batches) : 0.0);
    end_epoch(opt);
  }
  result.steps = opt.step;
  result.final_learning_rate = opt.learning_rate;
  return result;
}

std::pair<std::vector<SkeletonSequence>, std::vector<SkeletonSequence>> split_dataset(
    const std::vector<SkeletonSequence>& data, double validation_fraction) {
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw ParameterError("validation fraction must lie in [0, 1)");
  }
  const auto n = data.size();
  auto val = static_cast<std::size_t>(std::lround(validation_fraction * static_cast<double>(n)));
  if (val >= n) val = n > 0 ? n - 1 : 0;
  std::vector<SkeletonSequence> train_set(data.begin(), data.end() - static_cast<std::ptrdiff_t>(val));
  std::vector<SkeletonSequence> val_set(data.end() - static_cast<std::ptrdiff_t>(val), data.end());
  return {std::move(train_set), std::move(val_set)};
}

EvalResult evaluate(const ParameterSet& params, const TrainConfig& cfg,
                    const std::vector<SkeletonSequence>& data, const std::vector<int>& horizon_frames) {
  if (horizon_frames.empty()) throw ArgumentError("evaluate needs at least one horizon");
  if (data.empty()) throw DataError("evaluation set is empty");
  const int max_h = *std::max_element(horizon_frames.begin(), horizon_frames.end());
  if (*std::min_element(horizon_frames.begin(), horizon_frames.end()) < 1) {
    throw ArgumentError("horizon frames must be >= 1");
  }
  const ModelConfig model = model_config(cfg, params.shape.joints);
  const auto windows = make_windows(data, params.shape.observed, max_h, cfg.window_stride);
  const auto T = static_cast<std::size_t>(params.shape.observed);
  const auto H = static_cast<std::size_t>(max_h);

  std::vector<SkeletonSequence> preds, zero, truth;
  preds.reserve(windows.size());
  for (const Window& w : windows) {
    const SkeletonSequence& seq = data[w.sequence];
    const SkeletonSequence observed = seq.slice(w.start, T);
    preds.push_back(rollout(observed, max_h, params, model));
    truth.push_back(seq.slice(w.start + T, H));
    zero.emplace_back(seq.joints(), std::vector<std::vector<double>>(H, observed.frame(T)),
                      seq.frame_interval_ms());
  }
  EvalResult r;
  r.horizon_frames = horizon_frames;
  r.model = mean_angle_error(preds, truth, horizon_frames);
  r.zero_velocity = mean_angle_error(zero, truth, horizon_frames);
  r.windows = windows.size();
  return r;
}

}  // namespace scrnn
