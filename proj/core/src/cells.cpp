#include "scrnn/cells.hpp"

#include <optional>
#include <string>

#include "scrnn/attention.hpp"
#include "scrnn/error.hpp"

namespace scrnn {

using ad::Var;

namespace {

Var affine3(Var W1, Var a, Var W2, Var b, Var W3, Var c, Var bias) {
  return ad::add(ad::add(ad::add(ad::matmul(W1, a), ad::matmul(W2, b)), ad::matmul(W3, c)), bias);
}

Var gru_blend(Var z, Var prev, Var candidate) {
  return ad::add(ad::mul(ad::one_minus(z), prev), ad::mul(z, candidate));
}

}  // namespace

Var skeleton_gru_step(Var x, Var h_prev, Var h_a, const SkeletonGruWeights<Var>& w) {
  Var z = ad::sigmoid(affine3(w.W_zx, x, w.W_zh, h_prev, w.W_za, h_a, w.b_z));
  Var r = ad::sigmoid(affine3(w.W_rx, x, w.W_rh, h_prev, w.W_ra, h_a, w.b_r));
  Var c = ad::tanh(ad::add(ad::add(ad::matmul(w.W_cx, x), ad::matmul(w.W_ch, ad::mul(r, h_prev))), w.b_c));
  return gru_blend(z, h_prev, c);
}

Var spatial_gru_step(Var M, Var Q_prev, Var O, const SpatialGruWeights<Var>& w) {
  Var Z = ad::sigmoid(affine3(w.W_zm, M, w.W_zq, Q_prev, w.W_zo, O, w.B_z));
  Var R = ad::sigmoid(affine3(w.W_rm, M, w.W_rq, Q_prev, w.W_ro, O, w.B_r));
  Var C = ad::tanh(ad::add(ad::add(ad::matmul(w.W_cm, M), ad::matmul(w.W_cq, ad::mul(R, Q_prev))), w.B_c));
  return gru_blend(Z, Q_prev, C);
}

Var confidence_gate(Var h_joint, Var m_joint, const GateWeights<Var>& w, double rho) {
  if (!(rho > 0.0)) throw ParameterError("gate bandwidth rho must be positive, got " + std::to_string(rho));
  Var f_h = ad::tanh(ad::add(ad::matmul(w.W_fh, h_joint), w.b_h));
  Var f_m = ad::tanh(ad::add(ad::matmul(w.W_fm, m_joint), w.b_m));
  return ad::gaussian(ad::sub(f_h, f_m), rho);
}

std::vector<Var> traverse_joints(Var F_tp, Var F_a, const JointTraversal& traversal,
                                 const JointAttentionWeights<Var>& attention,
                                 const SpatialGruWeights<Var>& spatial, double tau2,
                                 const JointFactorSource& factors, TraversalTrace* trace) {
  if (F_tp.rows() % 3 != 0) throw ShapeError("feature map rows are not a multiple of 3");
  const int joints = static_cast<int>(F_tp.rows() / 3);
  traversal.validate(joints);
  ad::Tape& tape = F_tp.tape();
  const auto K = static_cast<std::size_t>(joints);

  // Factors and context depend only on the visited joint, so each is built once per step.
  std::vector<std::optional<Var>> context(K);
  auto context_for = [&](int k) -> Var {
    auto& slot = context[static_cast<std::size_t>(k - 1)];
    if (slot) return *slot;
    Var alphas;
    if (factors.overrides && factors.overrides->contains(k)) {
      alphas = tape.leaf(factors.overrides->at(k));
    } else if (factors.force_unit) {
      alphas = tape.leaf(Matrix(K - 1, 1, 1.0));
    } else {
      alphas = joint_attention(F_tp, k, attention, tau2);
    }
    if (factors.record) (*factors.record)[k] = alphas.value();
    slot = coattention_context(coattention_map(F_a, F_tp, k, alphas), k);
    return *slot;
  };

  Var Q = tape.leaf(Matrix(3, F_tp.cols()));
  std::vector<Var> last(K);
  for (int k : traversal.order) {
    Var M = ad::slice_rows(F_tp, static_cast<std::size_t>(3 * (k - 1)), 3);
    Q = spatial_gru_step(M, Q, context_for(k), spatial);
    last[static_cast<std::size_t>(k - 1)] = Q;
    if (trace) {
      trace->joints.push_back(k);
      trace->states.push_back(Q.value());
    }
  }
  return last;
}

namespace {

SkeletonGruWeights<Var> leaves(ad::Tape& t, const SkeletonGruWeights<Matrix>& w) {
  return {t.leaf(w.W_zx), t.leaf(w.W_zh), t.leaf(w.W_za), t.leaf(w.W_rx),
          t.leaf(w.W_rh), t.leaf(w.W_ra), t.leaf(w.W_cx), t.leaf(w.W_ch),
          t.leaf(w.b_z),  t.leaf(w.b_r),  t.leaf(w.b_c)};
}

SpatialGruWeights<Var> leaves(ad::Tape& t, const SpatialGruWeights<Matrix>& w) {
  return {t.leaf(w.W_zm), t.leaf(w.W_zq), t.leaf(w.W_zo), t.leaf(w.W_rm),
          t.leaf(w.W_rq), t.leaf(w.W_ro), t.leaf(w.W_cm), t.leaf(w.W_cq),
          t.leaf(w.B_z),  t.leaf(w.B_r),  t.leaf(w.B_c)};
}

JointAttentionWeights<Var> leaves(ad::Tape& t, const JointAttentionWeights<Matrix>& w) {
  return {t.leaf(w.U_cb), t.leaf(w.U_cm), t.leaf(w.w_c), t.leaf(w.b_l)};
}

}  // namespace

Matrix skeleton_gru_step(const Matrix& x, const Matrix& h_prev, const Matrix& h_a,
                         const SkeletonGruWeights<Matrix>& w) {
  ad::Tape t;
  return skeleton_gru_step(t.leaf(x), t.leaf(h_prev), t.leaf(h_a), leaves(t, w)).value();
}

Matrix spatial_gru_step(const Matrix& M, const Matrix& Q_prev, const Matrix& O,
                        const SpatialGruWeights<Matrix>& w) {
  ad::Tape t;
  return spatial_gru_step(t.leaf(M), t.leaf(Q_prev), t.leaf(O), leaves(t, w)).value();
}

Matrix confidence_gate(const Matrix& h_joint, const Matrix& m_joint, const GateWeights<Matrix>& w,
                       double rho) {
  ad::Tape t;
  GateWeights<Var> gw{t.leaf(w.W_fh), t.leaf(w.W_fm), t.leaf(w.b_h), t.leaf(w.b_m)};
  return confidence_gate(t.leaf(h_joint), t.leaf(m_joint), gw, rho).value();
}

std::vector<Matrix> traverse_joints(const FeatureMap& F_tp, const FeatureMap& F_a,
                                    const JointTraversal& traversal,
                                    const JointAttentionWeights<Matrix>& attention,
                                    const SpatialGruWeights<Matrix>& spatial, double tau2,
                                    TraversalTrace* trace) {
  ad::Tape t;
  auto states = traverse_joints(t.leaf(F_tp.matrix), t.leaf(F_a.matrix), traversal,
                                leaves(t, attention), leaves(t, spatial), tau2, {}, trace);
  std::vector<Matrix> out;
  out.reserve(states.size());
  for (Var q : states) out.push_back(q.value());
  return out;
}

}  // namespace scrnn
