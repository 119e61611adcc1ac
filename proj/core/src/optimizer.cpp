#include "scrnn/optimizer.hpp"

#include <cmath>

#include "scrnn/error.hpp"

namespace scrnn {

namespace {

void require_match(const ParameterSet& a, const ParameterSet& b, const char* what) {
  if (!(a.shape == b.shape)) throw ShapeError(std::string(what) + ": parameter shapes differ");
  const auto wa = weight_list(a);
  const auto wb = weight_list(b);
  if (wa.size() != wb.size()) throw ShapeError(std::string(what) + ": parameter counts differ");
  for (std::size_t i = 0; i < wa.size(); ++i) {
    if (!wa[i]->same_shape(*wb[i])) {
      throw ShapeError(std::string(what) + ": weight " + std::to_string(i) + " is " +
                       wa[i]->shape_string() + " vs " + wb[i]->shape_string());
    }
  }
}

}  // namespace

std::vector<Matrix*> weight_list(ParameterSet& p) {
  std::vector<Matrix*> out;
  visit_weights(p.weights, [&](std::string_view, Matrix& m) { out.push_back(&m); });
  return out;
}

std::vector<const Matrix*> weight_list(const ParameterSet& p) {
  std::vector<const Matrix*> out;
  visit_weights(p.weights, [&](std::string_view, const Matrix& m) { out.push_back(&m); });
  return out;
}

OptimizerState make_optimizer(const ParameterSet& params, double learning_rate, double decay_rate,
                              double momentum) {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ParameterError("learning rate must be finite and >= 0");
  }
  if (!(decay_rate > 0.0 && decay_rate <= 1.0)) throw ParameterError("decay rate must lie in (0, 1]");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ParameterError("momentum must lie in [0, 1)");
  OptimizerState s;
  s.learning_rate = learning_rate;
  s.decay_rate = decay_rate;
  s.momentum = momentum;
  s.velocity = zeros_like(params);
  return s;
}

void sgd_momentum_step(ParameterSet& params, const ParameterSet& grads, OptimizerState& state) {
  require_match(params, grads, "sgd_momentum_step");
  require_match(params, state.velocity, "sgd_momentum_step velocity");
  auto p = weight_list(params);
  auto g = weight_list(grads);
  auto v = weight_list(state.velocity);
  for (std::size_t i = 0; i < p.size(); ++i) {
    double* pv = p[i]->data().data();
    const double* gv = g[i]->data().data();
    double* vv = v[i]->data().data();
    for (std::size_t j = 0; j < p[i]->size(); ++j) {
      vv[j] = state.momentum * vv[j] - state.learning_rate * gv[j];
      pv[j] += vv[j];
    }
  }
  ++state.step;
}

void end_epoch(OptimizerState& state) {
  state.learning_rate *= state.decay_rate;
  ++state.epoch;
}

double global_norm(const ParameterSet& grads) {
  double s = 0.0;
  for (const Matrix* m : weight_list(grads)) {
    for (double x : m->data()) s += x * x;
  }
  return std::sqrt(s);
}

double clip_global_norm(ParameterSet& grads, double max_norm) {
  const double norm = global_norm(grads);
  if (!std::isfinite(norm)) throw NumericError("gradient norm is not finite");
  if (max_norm > 0.0 && norm > max_norm) {
    const double s = max_norm / norm;
    for (Matrix* m : weight_list(grads)) *m *= s;
  }
  return norm;
}

void axpy(ParameterSet& a, double s, const ParameterSet& b) {
  require_match(a, b, "axpy");
  auto wa = weight_list(a);
  auto wb = weight_list(b);
  for (std::size_t i = 0; i < wa.size(); ++i) {
    double* x = wa[i]->data().data();
    const double* y = wb[i]->data().data();
    for (std::size_t j = 0; j < wa[i]->size(); ++j) x[j] += s * y[j];
  }
}

}  // namespace scrnn
