#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "scrnn/matrix.hpp"

/// Reverse-mode differentiation over dense matrices.
///
/// A Tape records every primitive in evaluation order, so node ids are a
/// topological order by construction. Var is a cheap handle (tape, id).
namespace scrnn::ad {

enum class Op : std::uint8_t {
  leaf,
  matmul,
  add,
  sub,
  mul,
  scale,
  add_scalar,
  tanh,
  sigmoid,
  gaussian,           // exp(-rho * x^2)
  transpose,
  slice_rows,
  slice_cols,
  hcat,
  vcat,
  add_col,            // (r x c) + broadcast (r x 1)
  scale_cols,         // column j scaled by v[j]
  scale_rows,         // row i scaled by v[i]
  row_sum,            // M * 1
  sum,
  sum_squares,
  softmax,            // temperature softmax over all entries
  reshape,
  select_cols,
  joint_row_weights,  // (K-1) joint factors -> 3K row weights, target joint fixed at 1
};

std::string_view to_string(Op op);

class Tape;

class Var {
 public:
  Var() = default;

  bool valid() const noexcept { return tape_ != nullptr; }
  std::size_t id() const noexcept { return id_; }
  Tape& tape() const noexcept { return *tape_; }
  const Matrix& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

struct NodeAttr {
  double scalar = 0.0;
  std::size_t a = 0;
  std::size_t b = 0;
  std::vector<std::size_t> index;
};

struct Node {
  Op op = Op::leaf;
  std::vector<std::size_t> inputs;
  NodeAttr attr;
  Matrix value;
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = delete;
  Tape& operator=(Tape&&) = delete;

  Var leaf(Matrix value);

  /// Appends a computed node. Rejects non-finite values with NumericError.
  Var record(Op op, Matrix value, std::vector<std::size_t> inputs, NodeAttr attr = {});

  std::size_t size() const noexcept { return nodes_.size(); }
  const Node& node(std::size_t id) const { return nodes_.at(id); }
  const Matrix& value(std::size_t id) const { return nodes_.at(id).value; }
  void reserve(std::size_t n) { nodes_.reserve(n); }

 private:
  std::vector<Node> nodes_;
};

/// Adjoints for every node of a tape; nodes the loss does not depend on hold zeros.
class Gradients {
 public:
  explicit Gradients(std::vector<Matrix> adjoints) : adjoints_(std::move(adjoints)) {}

  const Matrix& operator[](Var v) const { return adjoints_.at(v.id()); }
  const Matrix& at(std::size_t id) const { return adjoints_.at(id); }
  std::size_t size() const noexcept { return adjoints_.size(); }

 private:
  std::vector<Matrix> adjoints_;
};

Gradients backward(const Tape& tape, Var loss);

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double s);
Var add_scalar(Var a, double s);
Var one_minus(Var a);
Var tanh(Var a);
Var sigmoid(Var a);
Var gaussian(Var a, double rho);
Var transpose(Var a);
Var slice_rows(Var a, std::size_t start, std::size_t count);
Var slice_cols(Var a, std::size_t start, std::size_t count);
Var hcat(std::span<const Var> parts);
Var vcat(std::span<const Var> parts);
Var add_col(Var m, Var column);
Var scale_cols(Var m, Var factors);
Var scale_rows(Var m, Var factors);
Var row_sum(Var a);
Var row_mean(Var a);
Var sum(Var a);
Var sum_squares(Var a);
Var softmax(Var scores, double tau);
Var reshape(Var a, std::size_t rows, std::size_t cols);
Var select_cols(Var a, std::vector<std::size_t> columns);
/// Expands per-joint factors (one per joint other than `target`, ascending id,
/// 0-based target index) into a 3K x 1 row-weight column. The target joint's
/// three rows get weight 1.
Var joint_row_weights(Var factors, std::size_t target, std::size_t joints);

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }

}  // namespace scrnn::ad
