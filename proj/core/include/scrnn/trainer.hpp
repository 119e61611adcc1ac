#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "scrnn/config.hpp"
#include "scrnn/optimizer.hpp"
#include "scrnn/params.hpp"
#include "scrnn/skeleton.hpp"

namespace scrnn {

/// Observed frames [start, start + T) and targets [start + T, start + T + T')
/// of one sequence; start is 1-based.
struct Window {
  std::size_t sequence = 0;
  std::size_t start = 1;

  friend bool operator==(const Window&, const Window&) = default;
};

/// Every window of length observed + horizon, advancing by stride.
std::vector<Window> make_windows(const std::vector<SkeletonSequence>& data, int observed, int horizon,
                                 int stride);

struct LossRecord {
  int epoch = 0;     // 1-based
  std::int64_t step = 0;  // 1-based optimizer step
  double loss = 0.0;

  friend bool operator==(const LossRecord&, const LossRecord&) = default;
};

std::string history_to_csv(const std::vector<LossRecord>& history);

/// Loss of one window under the configured objective; fills grads when non-null.
double window_loss(const ParameterSet& params, const ModelConfig& model, const TrainConfig& cfg,
                   const SkeletonSequence& seq, std::size_t start, ParameterSet* grads);

struct TrainResult {
  ParameterSet params;
  std::vector<LossRecord> history;
  std::int64_t steps = 0;
  double final_learning_rate = 0.0;
};

/// Called after every epoch with (epoch, mean loss over the epoch).
using EpochCallback = std::function<void(int, double)>;

/// Minimizes the configured loss over every window of `data`.
/// Starts from initialize_parameters(model_shape(cfg, K), cfg.seed) unless `init` is given.
TrainResult train(const std::vector<SkeletonSequence>& data, const TrainConfig& cfg,
                  const ParameterSet* init = nullptr, const EpochCallback& on_epoch = {});

/// Train / validation split: the last round(fraction * N) sequences validate,
/// keeping at least one training sequence.
std::pair<std::vector<SkeletonSequence>, std::vector<SkeletonSequence>> split_dataset(
    const std::vector<SkeletonSequence>& data, double validation_fraction);

struct EvalResult {
  std::vector<int> horizon_frames;
  std::vector<double> model;          // MAE per horizon
  std::vector<double> zero_velocity;  // MAE of repeating the last observed frame
  std::size_t windows = 0;
};

/// Rolls out every window of `data` (stride cfg.window_stride, length
/// T + max(horizon_frames)) and averages MAE per horizon.
EvalResult evaluate(const ParameterSet& params, const TrainConfig& cfg,
                    const std::vector<SkeletonSequence>& data, const std::vector<int>& horizon_frames);

}  // namespace scrnn
