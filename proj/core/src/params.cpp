#include "scrnn/params.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "scrnn/error.hpp"

namespace scrnn {

std::pair<std::size_t, std::size_t> expected_shape(const ModelShape& shape, std::string_view name) {
  const std::size_t d = shape.dim();
  const auto n = static_cast<std::size_t>(shape.hidden);
  const auto a = static_cast<std::size_t>(shape.attention);
  const auto cols = static_cast<std::size_t>(shape.observed + 1);

  if (name == "U_eh") return {a, n};
  if (name == "U_ef") return {a, d};
  if (name == "w_e" || name == "b_e" || name == "w_c" || name == "b_l") return {a, 1};
  if (name == "U_cb" || name == "U_cm") return {a, 3};
  if (name == "W_zx" || name == "W_za" || name == "W_rx" || name == "W_ra" || name == "W_cx")
    return {n, d};
  if (name == "W_zh" || name == "W_rh" || name == "W_ch") return {n, n};
  if (name == "b_z" || name == "b_r" || name == "b_c") return {n, 1};
  if (name == "W_zm" || name == "W_zq" || name == "W_zo" || name == "W_rm" || name == "W_rq" ||
      name == "W_ro" || name == "W_cm" || name == "W_cq")
    return {3, 3};
  if (name == "B_z" || name == "B_r" || name == "B_c") return {3, cols};
  if (name == "W_fh" || name == "W_fm") return {d, d};
  if (name == "b_h" || name == "b_m") return {d, 1};
  if (name == "P_out") return {d, n};
  throw ArgumentError("unknown weight '" + std::string(name) + "'");
}

namespace {

void check_shape(const ModelShape& shape) {
  if (shape.joints < 2 || shape.observed < 1 || shape.hidden < 1 || shape.attention < 1) {
    throw ShapeError("invalid model shape: K=" + std::to_string(shape.joints) +
                     " T=" + std::to_string(shape.observed) +
                     " n=" + std::to_string(shape.hidden) +
                     " a=" + std::to_string(shape.attention));
  }
}

bool is_bias(std::string_view name) { return name[0] == 'b' || name[0] == 'B'; }

}  // namespace

std::size_t ParameterSet::scalar_count() const {
  std::size_t total = 0;
  visit_weights(weights, [&](std::string_view, const Matrix& m) { total += m.size(); });
  return total;
}

void ParameterSet::validate() const {
  check_shape(shape);
  if (shape.projected() != present(weights.P_out)) {
    throw ShapeError(shape.projected() ? "hidden size differs from 3K but P_out is missing"
                                       : "P_out present although hidden size equals 3K");
  }
  visit_weights(weights, [&](std::string_view name, const Matrix& m) {
    const auto [rows, cols] = expected_shape(shape, name);
    if (m.rows() != rows || m.cols() != cols) {
      throw ShapeError("weight " + std::string(name) + " is " + m.shape_string() +
                       ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  });
}

ParameterSet initialize_parameters(const ModelShape& shape, std::uint64_t seed) {
  check_shape(shape);
  ParameterSet p{shape, {}};
  if (shape.projected()) p.weights.P_out = Matrix(shape.dim(), static_cast<std::size_t>(shape.hidden));
  std::mt19937_64 rng(seed);

  // P_out is allocated above so the visitor reaches it.
  visit_weights(p.weights, [&](std::string_view name, Matrix& m) {
    const auto [rows, cols] = expected_shape(shape, name);
    m = Matrix(rows, cols);
    if (is_bias(name)) {
      if (name == "b_z" || name == "B_z") m = Matrix(rows, cols, 1.0);
      return;
    }
    // Score vectors w_e / w_c enter as w^T, so their fan-in is their length.
    const bool score_vector = name == "w_e" || name == "w_c";
    const double fan_in = static_cast<double>(score_vector ? rows : cols);
    std::uniform_real_distribution<double> dist(-1.0 / std::sqrt(fan_in), 1.0 / std::sqrt(fan_in));
    for (double& v : m.data()) v = dist(rng);
  });
  return p;
}

ParameterSet zeros_like(const ParameterSet& p) {
  ParameterSet out = p;
  visit_weights(out.weights, [](std::string_view, Matrix& m) {
    for (double& v : m.data()) v = 0.0;
  });
  return out;
}

ModelWeights<ad::Var> bind(ad::Tape& tape, const ParameterSet& p) {
  std::vector<const Matrix*> values;
  visit_weights(p.weights, [&](std::string_view, const Matrix& m) { values.push_back(&m); });
  ModelWeights<ad::Var> vars;
  if (present(p.weights.P_out)) vars.P_out = tape.leaf(p.weights.P_out);
  std::size_t i = 0;
  visit_weights(vars, [&](std::string_view name, ad::Var& v) {
    if (name == "P_out") return;
    v = tape.leaf(*values[i]);
    ++i;
  });
  return vars;
}

ParameterSet collect_gradients(const ad::Gradients& grads, const ModelWeights<ad::Var>& vars,
                               const ParameterSet& p) {
  std::vector<const Matrix*> adjoints;
  visit_weights(vars, [&](std::string_view, const ad::Var& v) { adjoints.push_back(&grads[v]); });
  ParameterSet out = p;
  std::size_t i = 0;
  visit_weights(out.weights, [&](std::string_view, Matrix& m) { m = *adjoints[i++]; });
  return out;
}

}  // namespace scrnn
