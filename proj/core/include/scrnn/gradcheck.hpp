#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "scrnn/config.hpp"
#include "scrnn/params.hpp"
#include "scrnn/tape.hpp"

namespace scrnn {

struct GradCheckGroup {
  std::string name;
  std::size_t checked = 0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckGroup> groups;  // one per weight, canonical order
  std::size_t checked = 0;
  double max_rel_error = 0.0;
  double seconds = 0.0;

  bool passed(double threshold) const { return max_rel_error < threshold; }
  std::string to_text(double threshold) const;
};

/// Builds a scalar loss on `tape` from the bound weights.
using LossBuilder = std::function<ad::Var(ad::Tape&, const ModelWeights<ad::Var>&)>;
/// Lets tests corrupt the analytic gradient before comparison.
using GradientHook = std::function<void(ParameterSet&)>;

/// |analytic - numeric| / max(|analytic|, |numeric|, floor)
double relative_error(double analytic, double numeric, double floor = 1e-6);

/// Central differences with step h on every entry, or on `sample` random
/// entries when sample > 0.
GradCheckReport check_gradients(const ParameterSet& params, const LossBuilder& build, double h,
                                std::size_t sample = 0, std::uint64_t seed = 1,
                                const GradientHook& hook = {});

/// Gram loss of a full rollout on a random small instance drawn from
/// cfg.gradcheck and instance_seed.
GradCheckReport grad_check(const TrainConfig& cfg, std::uint64_t instance_seed,
                           const GradientHook& hook = {});

}  // namespace scrnn
