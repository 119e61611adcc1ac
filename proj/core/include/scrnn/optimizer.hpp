#pragma once

#include <cstdint>
#include <vector>

#include "scrnn/params.hpp"

namespace scrnn {

/// SGD with momentum. The learning rate decays once per epoch boundary.
struct OptimizerState {
  double learning_rate = 0.5e-3;
  double decay_rate = 0.95;
  double momentum = 0.9;
  ParameterSet velocity;
  std::int64_t step = 0;
  int epoch = 0;
};

OptimizerState make_optimizer(const ParameterSet& params, double learning_rate, double decay_rate,
                              double momentum);

/// v <- momentum * v - lr * g; p <- p + v.
void sgd_momentum_step(ParameterSet& params, const ParameterSet& grads, OptimizerState& state);

/// lr <- lr * decay_rate.
void end_epoch(OptimizerState& state);

/// Flat views over every weight, in canonical order.
std::vector<Matrix*> weight_list(ParameterSet& p);
std::vector<const Matrix*> weight_list(const ParameterSet& p);

double global_norm(const ParameterSet& grads);

/// Rescales grads so the global norm is at most max_norm; returns the norm before clipping.
double clip_global_norm(ParameterSet& grads, double max_norm);

/// a += s * b, entrywise over every weight.
void axpy(ParameterSet& a, double s, const ParameterSet& b);

}  // namespace scrnn
