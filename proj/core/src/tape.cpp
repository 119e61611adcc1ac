#include "scrnn/tape.hpp"

#include <cmath>
#include <string>

#include "scrnn/error.hpp"

namespace scrnn::ad {

std::string_view to_string(Op op) {
  switch (op) {
    case Op::leaf: return "leaf";
    case Op::matmul: return "matmul";
    case Op::add: return "add";
    case Op::sub: return "sub";
    case Op::mul: return "mul";
    case Op::scale: return "scale";
    case Op::add_scalar: return "add_scalar";
    case Op::tanh: return "tanh";
    case Op::sigmoid: return "sigmoid";
    case Op::gaussian: return "gaussian";
    case Op::transpose: return "transpose";
    case Op::slice_rows: return "slice_rows";
    case Op::slice_cols: return "slice_cols";
    case Op::hcat: return "hcat";
    case Op::vcat: return "vcat";
    case Op::add_col: return "add_col";
    case Op::scale_cols: return "scale_cols";
    case Op::scale_rows: return "scale_rows";
    case Op::row_sum: return "row_sum";
    case Op::sum: return "sum";
    case Op::sum_squares: return "sum_squares";
    case Op::softmax: return "softmax";
    case Op::reshape: return "reshape";
    case Op::select_cols: return "select_cols";
    case Op::joint_row_weights: return "joint_row_weights";
  }
  return "unknown";
}

const Matrix& Var::value() const { return tape_->value(id_); }

Var Tape::leaf(Matrix value) { return record(Op::leaf, std::move(value), {}); }

Var Tape::record(Op op, Matrix value, std::vector<std::size_t> inputs, NodeAttr attr) {
  if (!all_finite(value)) {
    throw NumericError("non-finite value produced by " + std::string(to_string(op)) +
                       " (node " + std::to_string(nodes_.size()) + ")");
  }
  nodes_.push_back(Node{op, std::move(inputs), std::move(attr), std::move(value)});
  return Var(this, nodes_.size() - 1);
}

namespace {

Tape& same_tape(Var a, Var b) {
  if (!a.valid() || !b.valid() || &a.tape() != &b.tape()) {
    throw ArgumentError("operands belong to different tapes");
  }
  return a.tape();
}

void require_same_shape(const char* op, const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                     b.shape_string());
  }
}

template <class Fn>
Var unary(Op op, Var a, NodeAttr attr, Fn&& fn) {
  Matrix out = a.value();
  for (double& v : out.data()) v = fn(v);
  return a.tape().record(op, std::move(out), {a.id()}, std::move(attr));
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape& t = same_tape(a, b);
  return t.record(Op::matmul, scrnn::matmul(a.value(), b.value()), {a.id(), b.id()});
}

Var add(Var a, Var b) {
  Tape& t = same_tape(a, b);
  require_same_shape("add", a.value(), b.value());
  Matrix out = a.value();
  out += b.value();
  return t.record(Op::add, std::move(out), {a.id(), b.id()});
}

Var sub(Var a, Var b) {
  Tape& t = same_tape(a, b);
  require_same_shape("sub", a.value(), b.value());
  Matrix out = a.value();
  out -= b.value();
  return t.record(Op::sub, std::move(out), {a.id(), b.id()});
}

Var mul(Var a, Var b) {
  Tape& t = same_tape(a, b);
  require_same_shape("mul", a.value(), b.value());
  Matrix out = a.value();
  const Matrix& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  return t.record(Op::mul, std::move(out), {a.id(), b.id()});
}

Var scale(Var a, double s) {
  return unary(Op::scale, a, {.scalar = s}, [s](double v) { return v * s; });
}

Var add_scalar(Var a, double s) {
  return unary(Op::add_scalar, a, {.scalar = s}, [s](double v) { return v + s; });
}

Var one_minus(Var a) { return add_scalar(scale(a, -1.0), 1.0); }

Var tanh(Var a) {
  return unary(Op::tanh, a, {}, [](double v) { return std::tanh(v); });
}

Var sigmoid(Var a) {
  return unary(Op::sigmoid, a, {}, [](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Var gaussian(Var a, double rho) {
  if (!(rho > 0.0)) throw ParameterError("gaussian bandwidth must be positive");
  return unary(Op::gaussian, a, {.scalar = rho},
               [rho](double v) { return std::exp(-rho * v * v); });
}

Var transpose(Var a) {
  return a.tape().record(Op::transpose, scrnn::transpose(a.value()), {a.id()});
}

Var slice_rows(Var a, std::size_t start, std::size_t count) {
  const Matrix& m = a.value();
  if (count == 0 || start + count > m.rows()) {
    throw ShapeError("slice_rows: rows [" + std::to_string(start) + ", " +
                     std::to_string(start + count) + ") out of range for " + m.shape_string());
  }
  Matrix out(count, m.cols());
  for (std::size_t r = 0; r < count; ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(start + r, c);
  return a.tape().record(Op::slice_rows, std::move(out), {a.id()}, {.a = start, .b = count});
}

Var slice_cols(Var a, std::size_t start, std::size_t count) {
  const Matrix& m = a.value();
  if (count == 0 || start + count > m.cols()) {
    throw ShapeError("slice_cols: columns [" + std::to_string(start) + ", " +
                     std::to_string(start + count) + ") out of range for " + m.shape_string());
  }
  Matrix out(m.rows(), count);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = m(r, start + c);
  return a.tape().record(Op::slice_cols, std::move(out), {a.id()}, {.a = start, .b = count});
}

Var hcat(std::span<const Var> parts) {
  if (parts.empty()) throw ArgumentError("hcat of zero parts");
  Tape& t = parts.front().tape();
  const std::size_t rows = parts.front().rows();
  std::size_t cols = 0;
  std::vector<std::size_t> inputs;
  for (Var p : parts) {
    same_tape(parts.front(), p);
    if (p.rows() != rows) {
      throw ShapeError("hcat: row count mismatch " + parts.front().value().shape_string() +
                       " vs " + p.value().shape_string());
    }
    cols += p.cols();
    inputs.push_back(p.id());
  }
  Matrix out(rows, cols);
  std::size_t offset = 0;
  for (Var p : parts) {
    const Matrix& m = p.value();
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) out(r, offset + c) = m(r, c);
    offset += m.cols();
  }
  return t.record(Op::hcat, std::move(out), std::move(inputs));
}

Var vcat(std::span<const Var> parts) {
  if (parts.empty()) throw ArgumentError("vcat of zero parts");
  Tape& t = parts.front().tape();
  const std::size_t cols = parts.front().cols();
  std::vector<double> data;
  std::vector<std::size_t> inputs;
  std::size_t rows = 0;
  for (Var p : parts) {
    same_tape(parts.front(), p);
    if (p.cols() != cols) {
      throw ShapeError("vcat: column count mismatch " + parts.front().value().shape_string() +
                       " vs " + p.value().shape_string());
    }
    const auto d = p.value().data();
    data.insert(data.end(), d.begin(), d.end());
    rows += p.rows();
    inputs.push_back(p.id());
  }
  return t.record(Op::vcat, Matrix(rows, cols, std::move(data)), std::move(inputs));
}

Var add_col(Var m, Var column) {
  Tape& t = same_tape(m, column);
  const Matrix& mv = m.value();
  const Matrix& cv = column.value();
  if (cv.cols() != 1 || cv.rows() != mv.rows()) {
    throw ShapeError("add_col: cannot broadcast " + cv.shape_string() + " over " +
                     mv.shape_string());
  }
  Matrix out = mv;
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += cv[r];
  return t.record(Op::add_col, std::move(out), {m.id(), column.id()});
}

Var scale_cols(Var m, Var factors) {
  Tape& t = same_tape(m, factors);
  const Matrix& mv = m.value();
  const Matrix& f = factors.value();
  if (f.size() != mv.cols()) {
    throw ShapeError("scale_cols: " + std::to_string(f.size()) + " factors for " +
                     mv.shape_string());
  }
  Matrix out = mv;
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) *= f[c];
  return t.record(Op::scale_cols, std::move(out), {m.id(), factors.id()});
}

Var scale_rows(Var m, Var factors) {
  Tape& t = same_tape(m, factors);
  const Matrix& mv = m.value();
  const Matrix& f = factors.value();
  if (f.size() != mv.rows()) {
    throw ShapeError("scale_rows: " + std::to_string(f.size()) + " factors for " +
                     mv.shape_string());
  }
  Matrix out = mv;
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) *= f[r];
  return t.record(Op::scale_rows, std::move(out), {m.id(), factors.id()});
}

Var row_sum(Var a) {
  const Matrix& m = a.value();
  Matrix out(m.rows(), 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double s = 0.0;
    for (double v : m.row(r)) s += v;
    out[r] = s;
  }
  return a.tape().record(Op::row_sum, std::move(out), {a.id()});
}

Var row_mean(Var a) { return scale(row_sum(a), 1.0 / static_cast<double>(a.cols())); }

Var sum(Var a) {
  double s = 0.0;
  for (double v : a.value().data()) s += v;
  return a.tape().record(Op::sum, Matrix(1, 1, s), {a.id()});
}

Var sum_squares(Var a) {
  double s = 0.0;
  for (double v : a.value().data()) s += v * v;
  return a.tape().record(Op::sum_squares, Matrix(1, 1, s), {a.id()});
}

Var softmax(Var scores, double tau) {
  const Matrix& m = scores.value();
  std::vector<double> w = softmax_temperature(m.data(), tau);
  return scores.tape().record(Op::softmax, Matrix(m.rows(), m.cols(), std::move(w)),
                              {scores.id()}, {.scalar = tau});
}

Var reshape(Var a, std::size_t rows, std::size_t cols) {
  const Matrix& m = a.value();
  if (rows * cols != m.size()) {
    throw ShapeError("reshape: cannot view " + m.shape_string() + " as " + std::to_string(rows) +
                     "x" + std::to_string(cols));
  }
  std::vector<double> d(m.data().begin(), m.data().end());
  return a.tape().record(Op::reshape, Matrix(rows, cols, std::move(d)), {a.id()});
}

Var select_cols(Var a, std::vector<std::size_t> columns) {
  const Matrix& m = a.value();
  if (columns.empty()) throw ArgumentError("select_cols with no columns");
  Matrix out(m.rows(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] >= m.cols()) {
      throw ShapeError("select_cols: column " + std::to_string(columns[j]) +
                       " out of range for " + m.shape_string());
    }
    for (std::size_t r = 0; r < m.rows(); ++r) out(r, j) = m(r, columns[j]);
  }
  return a.tape().record(Op::select_cols, std::move(out), {a.id()}, {.index = std::move(columns)});
}

Var joint_row_weights(Var factors, std::size_t target, std::size_t joints) {
  const Matrix& f = factors.value();
  if (joints < 2 || target >= joints || f.size() != joints - 1) {
    throw ShapeError("joint_row_weights: " + std::to_string(f.size()) + " factors for " +
                     std::to_string(joints) + " joints, target " + std::to_string(target));
  }
  Matrix out(3 * joints, 1, 1.0);
  std::size_t pos = 0;
  for (std::size_t l = 0; l < joints; ++l) {
    if (l == target) continue;
    for (std::size_t c = 0; c < 3; ++c) out[3 * l + c] = f[pos];
    ++pos;
  }
  return factors.tape().record(Op::joint_row_weights, std::move(out), {factors.id()},
                               {.a = target, .b = joints});
}

Gradients backward(const Tape& tape, Var loss) {
  if (!loss.valid() || &loss.tape() != &tape) throw ArgumentError("loss does not belong to tape");
  if (loss.value().size() != 1) {
    throw ArgumentError("backward: loss must be scalar, got " + loss.value().shape_string());
  }
  std::vector<Matrix> adj;
  adj.reserve(tape.size());
  for (std::size_t i = 0; i < tape.size(); ++i) {
    const Matrix& v = tape.value(i);
    adj.emplace_back(v.rows(), v.cols(), 0.0);
  }
  adj[loss.id()][0] = 1.0;

  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    const Node& n = tape.node(id);
    const Matrix& g = adj[id];
    if (n.op == Op::leaf) continue;
    const Matrix& y = n.value;
    auto in = [&](std::size_t i) -> Matrix& { return adj[n.inputs[i]]; };
    auto val = [&](std::size_t i) -> const Matrix& { return tape.value(n.inputs[i]); };

    switch (n.op) {
      case Op::leaf: break;
      case Op::matmul: {
        const Matrix& a = val(0);
        const Matrix& b = val(1);
        Matrix& ga = in(0);
        Matrix& gb = in(1);
        // ga += g * b^T, gb += a^T * g
        for (std::size_t i = 0; i < a.rows(); ++i)
          for (std::size_t k = 0; k < a.cols(); ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < b.cols(); ++j) s += g(i, j) * b(k, j);
            ga(i, k) += s;
          }
        for (std::size_t k = 0; k < a.cols(); ++k)
          for (std::size_t i = 0; i < a.rows(); ++i) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) gb(k, j) += aik * g(i, j);
          }
        break;
      }
      case Op::add:
        in(0) += g;
        in(1) += g;
        break;
      case Op::sub:
        in(0) += g;
        in(1) -= g;
        break;
      case Op::mul: {
        const Matrix& a = val(0);
        const Matrix& b = val(1);
        Matrix& ga = in(0);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * b[i];
        Matrix& gb = in(1);
        for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * a[i];
        break;
      }
      case Op::scale: {
        Matrix& ga = in(0);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += n.attr.scalar * g[i];
        break;
      }
      case Op::add_scalar:
      case Op::reshape: {
        Matrix& ga = in(0);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
        break;
      }
      case Op::tanh: {
        Matrix& ga = in(0);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
        break;
      }
      case Op::sigmoid: {
        Matrix& ga = in(0);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
        break;
      }
      case Op::gaussian: {
        const Matrix& x = val(0);
        Matrix& ga = in(0);
        for (std::size_t i = 0; i < g.size(); ++i)
          ga[i] += g[i] * (-2.0 * n.attr.scalar * x[i] * y[i]);
        break;
      }
      case Op::transpose: {
        Matrix& ga = in(0);
        for (std::size_t r = 0; r < g.rows(); ++r)
          for (std::size_t c = 0; c < g.cols(); ++c) ga(c, r) += g(r, c);
        break;
      }
      case Op::slice_rows: {
        Matrix& ga = in(0);
        for (std::size_t r = 0; r < g.rows(); ++r)
          for (std::size_t c = 0; c < g.cols(); ++c) ga(n.attr.a + r, c) += g(r, c);
        break;
      }
      case Op::slice_cols: {
        Matrix& ga = in(0);
        for (std::size_t r = 0; r < g.rows(); ++r)
          for (std::size_t c = 0; c < g.cols(); ++c) ga(r, n.attr.a + c) += g(r, c);
        break;
      }
      case Op::hcat: {
        std::size_t offset = 0;
        for (std::size_t p = 0; p < n.inputs.size(); ++p) {
          Matrix& gp = in(p);
          for (std::size_t r = 0; r < gp.rows(); ++r)
            for (std::size_t c = 0; c < gp.cols(); ++c) gp(r, c) += g(r, offset + c);
          offset += gp.cols();
        }
        break;
      }
      case Op::vcat: {
        std::size_t offset = 0;
        for (std::size_t p = 0; p < n.inputs.size(); ++p) {
          Matrix& gp = in(p);
          for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += g[offset + i];
          offset += gp.size();
        }
        break;
      }
      case Op::add_col: {
        in(0) += g;
        Matrix& gc = in(1);
        for (std::size_t r = 0; r < g.rows(); ++r)
          for (std::size_t c = 0; c < g.cols(); ++c) gc[r] += g(r, c);
        break;
      }
      case Op::scale_cols: {
        const Matrix& m = val(0);
        const Matrix& f = val(1);
        Matrix& gm = in(0);
        Matrix& gf = in(1);
        for (std::size_t r = 0; r < g.rows(); ++r)
          for (std::size_t c = 0; c < g.cols(); ++c) {
            gm(r, c) += g(r, c) * f[c];
            gf[c] += g(r, c) * m(r, c);
          }
        break;
      }
      case Op::scale_rows: {
        const Matrix& m = val(0);
        const Matrix& f = val(1);
        Matrix& gm = in(0);
        Matrix& gf = in(1);
        for (std::size_t r = 0; r < g.rows(); ++r)
          for (std::size_t c = 0; c < g.cols(); ++c) {
            gm(r, c) += g(r, c) * f[r];
            gf[r] += g(r, c) * m(r, c);
          }
        break;
      }
      case Op::row_sum: {
        Matrix& ga = in(0);
        for (std::size_t r = 0; r < ga.rows(); ++r)
          for (std::size_t c = 0; c < ga.cols(); ++c) ga(r, c) += g[r];
        break;
      }
      case Op::sum: {
        Matrix& ga = in(0);
        for (double& v : ga.data()) v += g[0];
        break;
      }
      case Op::sum_squares: {
        const Matrix& a = val(0);
        Matrix& ga = in(0);
        for (std::size_t i = 0; i < a.size(); ++i) ga[i] += 2.0 * a[i] * g[0];
        break;
      }
      case Op::softmax: {
        double dot = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) dot += g[i] * y[i];
        Matrix& ga = in(0);
        const double inv_tau = 1.0 / n.attr.scalar;
        for (std::size_t i = 0; i < y.size(); ++i) ga[i] += inv_tau * y[i] * (g[i] - dot);
        break;
      }
      case Op::select_cols: {
        Matrix& ga = in(0);
        for (std::size_t r = 0; r < g.rows(); ++r)
          for (std::size_t j = 0; j < g.cols(); ++j) ga(r, n.attr.index[j]) += g(r, j);
        break;
      }
      case Op::joint_row_weights: {
        Matrix& gf = in(0);
        std::size_t pos = 0;
        for (std::size_t l = 0; l < n.attr.b; ++l) {
          if (l == n.attr.a) continue;
          gf[pos] += g[3 * l] + g[3 * l + 1] + g[3 * l + 2];
          ++pos;
        }
        break;
      }
    }
  }
  return Gradients(std::move(adj));
}

}  // namespace scrnn::ad
