#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scrnn/loss.hpp"
#include "scrnn/metrics.hpp"
#include "scrnn/params.hpp"
#include "scrnn/sc_gru.hpp"
#include "scrnn/synth.hpp"

namespace scrnn {

/// RBF bandwidth for the coefficient matrix: the per-window median pairwise
/// ground-truth distance, or a fixed value.
struct RbfTau {
  bool median = true;
  double value = 1.0;

  friend bool operator==(const RbfTau&, const RbfTau&) = default;
};

struct SynthSettings {
  SynthKind kind = SynthKind::walk_like;
  int joints = 4;
  int frames = 60;
  int count = 64;
  std::uint64_t seed = 7;

  friend bool operator==(const SynthSettings&, const SynthSettings&) = default;
};

struct GradCheckSettings {
  int joints = 3;
  int observed = 4;
  int horizon = 3;
  double step = 1e-5;
  double threshold = 1e-4;
  int sample = 0;  // 0 checks every entry
  std::uint64_t seed = 1;

  friend bool operator==(const GradCheckSettings&, const GradCheckSettings&) = default;
};

/// Every run setting, including defaults for constants the model leaves open.
struct TrainConfig {
  int observed = 20;  // T
  int horizon = 10;   // T'
  int batch_size = 32;
  int epochs = 200;
  double learning_rate = 0.5e-3;
  double decay_rate = 0.95;
  double momentum = 0.9;
  double clip_norm = 5.0;  // <= 0 disables clipping

  double tau1 = 1.0;
  double tau2 = 1.0;
  double rho = 1.0;
  RbfTau rbf_tau;
  LossKind loss = LossKind::gram;
  LossNormalization loss_normalization = LossNormalization::horizon;

  std::string traversal = "id";     // id | traveling | surrounding | traveling_fixed | custom
  std::vector<int> traversal_order; // used when traversal == "custom"
  Variant variant = Variant::full;
  InitMode init_mode = InitMode::encoder;
  int hidden_size = 0;      // 0 means 3K
  int attention_width = 0;  // 0 means 3K

  std::uint64_t seed = 42;
  int window_stride = 5;
  int threads = 1;
  bool deterministic = true;

  double frame_interval_ms = 40.0;
  std::vector<double> horizons_ms = kStandardHorizonsMs;
  double validation_fraction = 0.25;
  std::optional<std::vector<int>> joint_selection;

  SynthSettings synth;
  GradCheckSettings gradcheck;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Parses JSON; unknown keys and invalid enum values raise ConfigError naming
/// the key and the allowed values. Missing keys keep their defaults.
TrainConfig parse_config(std::string_view json_text);
TrainConfig load_config(const std::string& path);
std::string config_to_json(const TrainConfig& cfg, bool pretty = false);

/// Applies "key=value" (dotted keys reach nested objects, e.g. synth.kind=sinusoid).
/// The value is read as JSON when it parses, otherwise as a string.
void apply_override(TrainConfig& cfg, std::string_view assignment);

/// Range checks that do not depend on the data.
void validate(const TrainConfig& cfg);

ModelShape model_shape(const TrainConfig& cfg, int joints);
ModelConfig model_config(const TrainConfig& cfg, int joints);

}  // namespace scrnn
