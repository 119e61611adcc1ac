#pragma once

#include <array>
#include <vector>

#include "scrnn/config.hpp"
#include "scrnn/metrics.hpp"
#include "scrnn/sc_gru.hpp"
#include "scrnn/skeleton.hpp"
#include "scrnn/trainer.hpp"

namespace scrnn {

inline constexpr std::array<Variant, 4> kAllVariants = {Variant::full, Variant::no_sca,
                                                        Variant::no_skel_attn, Variant::no_joint_attn};

struct AblationResult {
  MaeTable table;            // one row per variant, in kAllVariants order
  std::vector<double> zero_velocity;
  std::vector<TrainResult> runs;
};

/// Splits `dataset` by base.validation_fraction, trains every variant from the
/// same seed and data, and reports validation MAE at base.horizons_ms.
AblationResult run_ablation(const std::vector<SkeletonSequence>& dataset, const TrainConfig& base);

/// Same, with an explicit split.
AblationResult run_ablation(const std::vector<SkeletonSequence>& train_set,
                            const std::vector<SkeletonSequence>& validation_set, const TrainConfig& base);

}  // namespace scrnn
