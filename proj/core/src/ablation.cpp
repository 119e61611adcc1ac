#include "scrnn/ablation.hpp"

#include "scrnn/error.hpp"

namespace scrnn {

AblationResult run_ablation(const std::vector<SkeletonSequence>& dataset, const TrainConfig& base) {
  auto [train_set, val_set] = split_dataset(dataset, base.validation_fraction);
  if (val_set.empty()) val_set = train_set;
  return run_ablation(train_set, val_set, base);
}

AblationResult run_ablation(const std::vector<SkeletonSequence>& train_set,
                            const std::vector<SkeletonSequence>& validation_set, const TrainConfig& base) {
  if (train_set.empty() || validation_set.empty()) throw DataError("ablation needs training and validation data");
  const double interval = validation_set.front().frame_interval_ms();
  const auto horizons = horizons_to_frames(base.horizons_ms, interval);

  AblationResult out;
  out.table.horizons_ms = base.horizons_ms;
  for (Variant v : kAllVariants) {
    TrainConfig cfg = base;
    cfg.variant = v;
    TrainResult run = train(train_set, cfg);
    const EvalResult e = evaluate(run.params, cfg, validation_set, horizons);
    out.table.rows.push_back({std::string(to_string(v)), e.model});
    if (out.zero_velocity.empty()) out.zero_velocity = e.zero_velocity;
    out.runs.push_back(std::move(run));
  }
  return out;
}

}  // namespace scrnn
