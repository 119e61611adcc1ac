#include "scrnn/attention.hpp"

#include <string>
#include <vector>

#include "scrnn/error.hpp"

namespace scrnn {

namespace {

int joint_count(ad::Var F) {
  if (F.rows() % 3 != 0) {
    throw ShapeError("feature map has " + std::to_string(F.rows()) + " rows, not a multiple of 3");
  }
  return static_cast<int>(F.rows() / 3);
}

void check_joint(int k, int joints) {
  if (joints < 2) throw ArgumentError("joint attention needs K >= 2, got " + std::to_string(joints));
  if (k < 1 || k > joints) {
    throw ArgumentError("joint " + std::to_string(k) + " out of range [1, " +
                        std::to_string(joints) + "]");
  }
}

}  // namespace

SkeletonAttentionNodes skeleton_attention(ad::Var F, ad::Var h_prev,
                                          const SkeletonAttentionWeights<ad::Var>& w, double tau1) {
  if (!(tau1 > 0.0)) throw ParameterError("tau1 must be positive, got " + std::to_string(tau1));
  ad::Var shared = ad::add(ad::matmul(w.U_eh, h_prev), w.b_e);
  ad::Var hidden = ad::tanh(ad::add_col(ad::matmul(w.U_ef, F), shared));
  ad::Var scores = ad::matmul(ad::transpose(w.w_e), hidden);
  return skeleton_attention_with_factors(F, ad::softmax(scores, tau1));
}

SkeletonAttentionNodes skeleton_attention_with_factors(ad::Var F, ad::Var factors) {
  ad::Var attended = ad::scale_cols(F, factors);
  return {factors, attended, ad::row_mean(attended)};
}

ad::Var joint_attention(ad::Var F_tp, int k, const JointAttentionWeights<ad::Var>& w,
                        double tau2) {
  const int joints = joint_count(F_tp);
  check_joint(k, joints);
  if (!(tau2 > 0.0)) throw ParameterError("tau2 must be positive, got " + std::to_string(tau2));
  const auto K = static_cast<std::size_t>(joints);

  // Column l of `motion` is M_l * 1.
  ad::Var motion = ad::transpose(ad::reshape(ad::row_sum(F_tp), K, 3));
  ad::Var target = ad::add(ad::matmul(w.U_cb, ad::slice_cols(motion, static_cast<std::size_t>(k - 1), 1)), w.b_l);
  ad::Var hidden = ad::tanh(ad::add_col(ad::matmul(w.U_cm, motion), target));
  ad::Var scores = ad::matmul(ad::transpose(w.w_c), hidden);

  std::vector<std::size_t> others;
  for (std::size_t l = 0; l < K; ++l)
    if (l != static_cast<std::size_t>(k - 1)) others.push_back(l);
  ad::Var alphas = ad::softmax(ad::select_cols(scores, std::move(others)), tau2);
  return ad::reshape(alphas, K - 1, 1);
}

ad::Var coattention_map(ad::Var F_a, ad::Var F_tp, int k, ad::Var alphas) {
  const int joints = joint_count(F_tp);
  check_joint(k, joints);
  if (F_a.rows() != F_tp.rows() || F_a.cols() + 1 != F_tp.cols()) {
    throw ShapeError("coattention_map: attended map " + F_a.value().shape_string() +
                     " does not pair with " + F_tp.value().shape_string());
  }
  if (alphas.value().size() != static_cast<std::size_t>(joints - 1)) {
    throw ArgumentError("coattention_map: expected " + std::to_string(joints - 1) +
                        " joint factors, got " + std::to_string(alphas.value().size()));
  }
  const ad::Var parts[] = {F_a, ad::slice_cols(F_tp, F_a.cols(), 1)};
  ad::Var base = ad::hcat(parts);
  ad::Var weights = ad::joint_row_weights(alphas, static_cast<std::size_t>(k - 1),
                                          static_cast<std::size_t>(joints));
  return ad::scale_rows(base, weights);
}

ad::Var coattention_context(ad::Var F_co, int k) {
  const int joints = joint_count(F_co);
  check_joint(k, joints);
  const auto K = static_cast<std::size_t>(joints);
  Matrix selector(3, 3 * K);
  const double share = 1.0 / static_cast<double>(K - 1);
  for (std::size_t l = 0; l < K; ++l) {
    if (l == static_cast<std::size_t>(k - 1)) continue;
    for (std::size_t c = 0; c < 3; ++c) selector(c, 3 * l + c) = share;
  }
  return ad::matmul(F_co.tape().leaf(std::move(selector)), F_co);
}

namespace {

SkeletonAttentionWeights<ad::Var> bind_weights(ad::Tape& t, const SkeletonAttentionWeights<Matrix>& w) {
  return {t.leaf(w.U_eh), t.leaf(w.U_ef), t.leaf(w.w_e), t.leaf(w.b_e)};
}

JointAttentionWeights<ad::Var> bind_weights(ad::Tape& t, const JointAttentionWeights<Matrix>& w) {
  return {t.leaf(w.U_cb), t.leaf(w.U_cm), t.leaf(w.w_c), t.leaf(w.b_l)};
}

std::vector<ColumnTime> observed_times(const FeatureMap& f, std::size_t cols) {
  return {f.column_times.begin(), f.column_times.begin() + static_cast<std::ptrdiff_t>(cols)};
}

}  // namespace

SkeletonAttention skeleton_attention(const FeatureMap& F, const Matrix& h_prev,
                                     const SkeletonAttentionWeights<Matrix>& w, double tau1) {
  ad::Tape t;
  auto nodes = skeleton_attention(t.leaf(F.matrix), t.leaf(h_prev), bind_weights(t, w), tau1);
  return {nodes.alphas.value(), FeatureMap{nodes.attended.value(), F.column_times},
          nodes.context.value()};
}

Matrix joint_attention(const FeatureMap& F_tp, int k, const JointAttentionWeights<Matrix>& w,
                       double tau2) {
  ad::Tape t;
  return joint_attention(t.leaf(F_tp.matrix), k, bind_weights(t, w), tau2).value();
}

FeatureMap coattention_map(const FeatureMap& F_a, const FeatureMap& F_tp, int k,
                           const Matrix& alphas) {
  ad::Tape t;
  ad::Var out = coattention_map(t.leaf(F_a.matrix), t.leaf(F_tp.matrix), k, t.leaf(alphas));
  auto times = observed_times(F_tp, F_tp.cols());
  return {out.value(), std::move(times)};
}

Matrix coattention_context(const FeatureMap& F_co, int k) {
  ad::Tape t;
  return coattention_context(t.leaf(F_co.matrix), k).value();
}

}  // namespace scrnn
