#pragma once

#include "scrnn/matrix.hpp"
#include "scrnn/params.hpp"
#include "scrnn/skeleton.hpp"
#include "scrnn/tape.hpp"

namespace scrnn {

// Tape-level building blocks. Joint ids are 1-based.

struct SkeletonAttentionNodes {
  ad::Var alphas;    // 1 x T
  ad::Var attended;  // F_a, d x T
  ad::Var context;   // h_a, d x 1
};

/// beta_j = w_e^T tanh(U_eh h_prev + U_ef F(:,j) + b_e); alpha = softmax(beta / tau1);
/// F_a(:,j) = alpha_j F(:,j); h_a = column mean of F_a.
SkeletonAttentionNodes skeleton_attention(ad::Var F, ad::Var h_prev,
                                          const SkeletonAttentionWeights<ad::Var>& w, double tau1);

/// Same construction with externally supplied factors (forced to 1 for ablations).
SkeletonAttentionNodes skeleton_attention_with_factors(ad::Var F, ad::Var factors);

/// Factors alpha^k_l for l != k in ascending l, as a (K-1) x 1 column. Scores use
/// the row sums M_l * 1 over all T + 1 columns.
ad::Var joint_attention(ad::Var F_tp, int k, const JointAttentionWeights<ad::Var>& w, double tau2);

/// Rows of joint l are alpha^k_l [F_a(l rows, 1:T), F_tp(l rows, end)]; joint k's
/// rows are passed through unscaled.
ad::Var coattention_map(ad::Var F_a, ad::Var F_tp, int k, ad::Var alphas);

/// O_k: 3 x (T + 1), row c the mean over l != k of F_co row 3(l-1)+c.
ad::Var coattention_context(ad::Var F_co, int k);

// Value-level forms of the same operations.

struct SkeletonAttention {
  Matrix alphas;
  FeatureMap attended;
  Matrix context;
};

SkeletonAttention skeleton_attention(const FeatureMap& F, const Matrix& h_prev,
                                     const SkeletonAttentionWeights<Matrix>& w, double tau1);
Matrix joint_attention(const FeatureMap& F_tp, int k, const JointAttentionWeights<Matrix>& w,
                       double tau2);
FeatureMap coattention_map(const FeatureMap& F_a, const FeatureMap& F_tp, int k,
                           const Matrix& alphas);
Matrix coattention_context(const FeatureMap& F_co, int k);

}  // namespace scrnn
