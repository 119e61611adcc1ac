#include "scrnn/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scrnn/error.hpp"

namespace scrnn {

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::config: return "config";
    case ErrorCategory::parameter: return "parameter";
    case ErrorCategory::argument: return "argument";
    case ErrorCategory::data: return "data";
    case ErrorCategory::shape: return "shape";
    case ErrorCategory::numeric: return "numeric";
    case ErrorCategory::internal: return "internal";
  }
  return "internal";
}

namespace {

void require_positive_dims(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw ShapeError("matrix dimensions must be >= 1, got " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
}

void require_same_shape(const char* op, const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                     b.shape_string());
  }
}

Matrix checked(const char* op, Matrix m) {
  if (!all_finite(m)) {
    throw NumericError(std::string(op) + ": produced a non-finite entry");
  }
  return m;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  require_positive_dims(rows, cols);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require_positive_dims(rows, cols);
  if (data_.size() != rows * cols) {
    throw ShapeError("matrix data length " + std::to_string(data_.size()) + " does not match " +
                     shape_string());
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  require_positive_dims(rows_, cols_);
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::row_vector(std::span<const double> values) {
  return Matrix(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::col(std::size_t c) const {
  if (c >= cols_) {
    throw ShapeError("column " + std::to_string(c) + " out of range for " + shape_string());
  }
  Matrix out(rows_, 1);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void Matrix::set_col(std::size_t c, const Matrix& values) {
  if (c >= cols_ || values.size() != rows_) {
    throw ShapeError("set_col: cannot write " + values.shape_string() + " into column " +
                     std::to_string(c) + " of " + shape_string());
  }
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

std::string Matrix::shape_string() const {
  std::ostringstream os;
  os << rows_ << "x" << cols_;
  return os.str();
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape("operator+=", *this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape("operator-=", *this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

bool all_finite(const Matrix& m) noexcept {
  return std::all_of(m.data().begin(), m.data().end(), [](double v) { return std::isfinite(v); });
}

double max_abs(const Matrix& m) noexcept {
  double best = 0.0;
  for (double v : m.data()) best = std::max(best, std::abs(v));
  return best;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape("max_abs_diff", a, b);
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
  return best;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ, " + a.shape_string() + " x " +
                     b.shape_string());
  }
  Matrix out(a.rows(), b.cols());
  const std::size_t n = a.cols();
  const std::size_t m = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* dst = out.data().data() + i * m;
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      const double* src = b.data().data() + k * m;
      for (std::size_t j = 0; j < m; ++j) dst[j] += aik * src[j];
    }
  }
  return checked("matmul", std::move(out));
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = m(r, c);
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_shape("add", a, b);
  Matrix out = a;
  out += b;
  return checked("add", std::move(out));
}

Matrix sub(const Matrix& a, const Matrix& b) {
  require_same_shape("sub", a, b);
  Matrix out = a;
  out -= b;
  return checked("sub", std::move(out));
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape("mul", a, b);
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return checked("mul", std::move(out));
}

Matrix scale(const Matrix& m, double s) {
  Matrix out = m;
  out *= s;
  return checked("scale", std::move(out));
}

Matrix tanh(const Matrix& m) {
  Matrix out = m;
  for (double& v : out.data()) v = std::tanh(v);
  return checked("tanh", std::move(out));
}

Matrix sigmoid(const Matrix& m) {
  Matrix out = m;
  for (double& v : out.data()) v = 1.0 / (1.0 + std::exp(-v));
  return checked("sigmoid", std::move(out));
}

std::vector<double> softmax_temperature(std::span<const double> scores, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ParameterError("softmax temperature must be positive and finite, got " +
                         std::to_string(tau));
  }
  if (scores.empty()) throw ArgumentError("softmax over an empty score list");
  for (double s : scores) {
    if (!std::isfinite(s)) throw NumericError("softmax: non-finite score");
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp((scores[i] - top) / tau);
    total += out[i];
  }
  for (double& w : out) w /= total;
  return out;
}

}  // namespace scrnn
