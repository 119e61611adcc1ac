#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "scrnn/matrix.hpp"
#include "scrnn/tape.hpp"

namespace scrnn {

/// I(i,j) = exp(-||x_i - x_j||^2 / tau^2) over ground-truth frames. Symmetric,
/// unit diagonal, entries in (0, 1]. Constant with respect to the predictions.
struct CoefficientMatrix {
  Matrix matrix;
  double tau = 1.0;
};

CoefficientMatrix coefficient_matrix(std::span<const Matrix> truth, double tau);

/// Median Euclidean distance over distinct ground-truth frame pairs; 1.0 when
/// there is no pair or the median is zero.
double median_pairwise_distance(std::span<const Matrix> truth);

/// V V^T where row i of V is I(i, t') x_i for i < t' and row t' is x_t';
/// t' = frames.size().
Matrix weighted_gram(std::span<const Matrix> frames, const CoefficientMatrix& coeffs);

enum class LossKind { gram, mse };
LossKind parse_loss_kind(std::string_view name);
std::string_view to_string(LossKind kind);

/// Divisor of the summed gram discrepancies: the horizon T' or the observed length T.
enum class LossNormalization { horizon, observed };
LossNormalization parse_loss_normalization(std::string_view name);
std::string_view to_string(LossNormalization n);

/// (1/divisor) sum_t' ||G(pred, t') - G(truth, t')||_F^2; both grams share the
/// coefficients computed from `truth`.
double gram_loss(std::span<const Matrix> pred, std::span<const Matrix> truth, double tau,
                 double divisor);
double gram_loss(std::span<const Matrix> pred, std::span<const Matrix> truth, double tau);

ad::Var gram_loss(std::span<const ad::Var> pred, std::span<const Matrix> truth,
                  const CoefficientMatrix& coeffs, double divisor);

/// Mean over T' * d of squared differences.
double mse_loss(std::span<const Matrix> pred, std::span<const Matrix> truth);
ad::Var mse_loss(std::span<const ad::Var> pred, std::span<const Matrix> truth);

}  // namespace scrnn
