#include "scrnn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scrnn/error.hpp"

namespace scrnn {

namespace {

double squared_distance(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) {
    throw ShapeError("frame size mismatch " + a.shape_string() + " vs " + b.shape_string());
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void require_same_length(const char* op, std::size_t a, std::size_t b) {
  if (a != b) {
    throw ShapeError(std::string(op) + ": " + std::to_string(a) + " predicted frames vs " +
                     std::to_string(b) + " ground-truth frames");
  }
  if (a == 0) throw ArgumentError(std::string(op) + ": empty sequence");
}

template <class P>
void require_same_frames(const char* op, std::span<const P> pred, std::span<const Matrix> truth) {
  require_same_length(op, pred.size(), truth.size());
  for (std::size_t t = 0; t < pred.size(); ++t) {
    if (pred[t].rows() != truth[t].rows() || pred[t].cols() != truth[t].cols()) {
      throw ShapeError(std::string(op) + ": frame " + std::to_string(t + 1) + " is " +
                       std::to_string(pred[t].rows()) + "x" + std::to_string(pred[t].cols()) +
                       ", ground truth is " + truth[t].shape_string());
    }
  }
}

}  // namespace

CoefficientMatrix coefficient_matrix(std::span<const Matrix> truth, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ParameterError("RBF tau must be positive, got " + std::to_string(tau));
  }
  if (truth.empty()) throw ArgumentError("coefficient matrix over an empty sequence");
  const std::size_t n = truth.size();
  Matrix m(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::exp(-squared_distance(truth[i], truth[j]) / (tau * tau));
      m(i, j) = v;
      m(j, i) = v;
    }
  return {std::move(m), tau};
}

double median_pairwise_distance(std::span<const Matrix> truth) {
  std::vector<double> d;
  for (std::size_t i = 0; i < truth.size(); ++i)
    for (std::size_t j = i + 1; j < truth.size(); ++j)
      d.push_back(std::sqrt(squared_distance(truth[i], truth[j])));
  if (d.empty()) return 1.0;
  std::sort(d.begin(), d.end());
  const std::size_t mid = d.size() / 2;
  const double median = d.size() % 2 ? d[mid] : 0.5 * (d[mid - 1] + d[mid]);
  return median > 0.0 ? median : 1.0;
}

Matrix weighted_gram(std::span<const Matrix> frames, const CoefficientMatrix& coeffs) {
  const std::size_t t = frames.size();
  if (t == 0) throw ArgumentError("weighted_gram over an empty prefix");
  if (t > coeffs.matrix.rows()) {
    throw ShapeError("weighted_gram: prefix of " + std::to_string(t) +
                     " frames exceeds coefficient matrix " + coeffs.matrix.shape_string());
  }
  std::vector<double> w(t);
  for (std::size_t i = 0; i + 1 < t; ++i) w[i] = coeffs.matrix(i, t - 1);
  w[t - 1] = 1.0;
  Matrix g(t, t);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j) {
      if (frames[i].size() != frames[j].size()) throw ShapeError("weighted_gram: ragged frames");
      double s = 0.0;
      for (std::size_t r = 0; r < frames[i].size(); ++r) s += frames[i][r] * frames[j][r];
      g(i, j) = w[i] * w[j] * s;
    }
  return g;
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "gram") return LossKind::gram;
  if (name == "mse") return LossKind::mse;
  throw ConfigError("unknown loss '" + std::string(name) + "'; expected one of: gram, mse");
}

std::string_view to_string(LossKind kind) { return kind == LossKind::gram ? "gram" : "mse"; }

LossNormalization parse_loss_normalization(std::string_view name) {
  if (name == "horizon") return LossNormalization::horizon;
  if (name == "observed") return LossNormalization::observed;
  throw ConfigError("unknown loss_normalization '" + std::string(name) +
                    "'; expected one of: horizon, observed");
}

std::string_view to_string(LossNormalization n) {
  return n == LossNormalization::horizon ? "horizon" : "observed";
}

double gram_loss(std::span<const Matrix> pred, std::span<const Matrix> truth, double tau,
                 double divisor) {
  require_same_frames("gram_loss", pred, truth);
  const CoefficientMatrix coeffs = coefficient_matrix(truth, tau);
  double total = 0.0;
  for (std::size_t t = 1; t <= pred.size(); ++t) {
    const Matrix gp = weighted_gram(pred.first(t), coeffs);
    const Matrix gt = weighted_gram(truth.first(t), coeffs);
    for (std::size_t i = 0; i < gp.size(); ++i) {
      const double d = gp[i] - gt[i];
      total += d * d;
    }
  }
  return total / divisor;
}

double gram_loss(std::span<const Matrix> pred, std::span<const Matrix> truth, double tau) {
  return gram_loss(pred, truth, tau, static_cast<double>(pred.size()));
}

ad::Var gram_loss(std::span<const ad::Var> pred, std::span<const Matrix> truth,
                  const CoefficientMatrix& coeffs, double divisor) {
  require_same_frames("gram_loss", pred, truth);
  ad::Tape& tape = pred.front().tape();
  ad::Var all = ad::hcat(pred);
  ad::Var total;
  for (std::size_t t = 1; t <= pred.size(); ++t) {
    Matrix w(1, t, 1.0);
    for (std::size_t i = 0; i + 1 < t; ++i) w[i] = coeffs.matrix(i, t - 1);
    ad::Var V = ad::scale_cols(ad::slice_cols(all, 0, t), tape.leaf(std::move(w)));
    ad::Var G = ad::matmul(ad::transpose(V), V);
    ad::Var term = ad::sum_squares(ad::sub(G, tape.leaf(weighted_gram(truth.first(t), coeffs))));
    total = total.valid() ? ad::add(total, term) : term;
  }
  return ad::scale(total, 1.0 / divisor);
}

double mse_loss(std::span<const Matrix> pred, std::span<const Matrix> truth) {
  require_same_length("mse_loss", pred.size(), truth.size());
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    total += squared_distance(pred[t], truth[t]);
    count += pred[t].size();
  }
  return total / static_cast<double>(count);
}

ad::Var mse_loss(std::span<const ad::Var> pred, std::span<const Matrix> truth) {
  require_same_length("mse_loss", pred.size(), truth.size());
  ad::Tape& tape = pred.front().tape();
  std::vector<ad::Var> diffs;
  std::size_t count = 0;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    if (pred[t].value().size() != truth[t].size()) {
      throw ShapeError("mse_loss: frame " + std::to_string(t + 1) + " size mismatch");
    }
    diffs.push_back(ad::sub(pred[t], tape.leaf(truth[t])));
    count += truth[t].size();
  }
  return ad::scale(ad::sum_squares(ad::vcat(diffs)), 1.0 / static_cast<double>(count));
}

}  // namespace scrnn
