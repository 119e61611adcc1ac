#pragma once

#include <map>
#include <vector>

#include "scrnn/matrix.hpp"
#include "scrnn/params.hpp"
#include "scrnn/skeleton.hpp"
#include "scrnn/tape.hpp"

namespace scrnn {

/// z = sig(W_zx x + W_zh h + W_za h_a + b_z), r likewise,
/// c = tanh(W_cx x + W_ch (r . h) + b_c), h' = (1 - z) . h + z . c.
ad::Var skeleton_gru_step(ad::Var x, ad::Var h_prev, ad::Var h_a,
                          const SkeletonGruWeights<ad::Var>& w);

/// Matrix-valued GRU over 3 x (T+1) operands; 3x3 weights act from the left.
ad::Var spatial_gru_step(ad::Var M, ad::Var Q_prev, ad::Var O, const SpatialGruWeights<ad::Var>& w);

/// gamma = exp(-rho (tanh(W_fh h_joint + b_h) - tanh(W_fm m_joint + b_m))^2).
ad::Var confidence_gate(ad::Var h_joint, ad::Var m_joint, const GateWeights<ad::Var>& w, double rho);

/// Where joint-attention factors come from during a traversal.
struct JointFactorSource {
  bool force_unit = false;                           // every alpha^k_l = 1
  const std::map<int, Matrix>* overrides = nullptr;  // per target joint, replaces the computed factors
  std::map<int, Matrix>* record = nullptr;           // receives the factors actually used
};

struct TraversalTrace {
  std::vector<int> joints;     // joint visited at s = 1..S
  std::vector<Matrix> states;  // Q after step s
};

/// Runs the spatial GRU along `traversal`, chaining one state through every
/// visit starting from Q_0 = 0. Element k-1 of the result is the state left by
/// joint k's last visit.
std::vector<ad::Var> traverse_joints(ad::Var F_tp, ad::Var F_a, const JointTraversal& traversal,
                                     const JointAttentionWeights<ad::Var>& attention,
                                     const SpatialGruWeights<ad::Var>& spatial, double tau2,
                                     const JointFactorSource& factors = {},
                                     TraversalTrace* trace = nullptr);

// Value-level forms.

Matrix skeleton_gru_step(const Matrix& x, const Matrix& h_prev, const Matrix& h_a,
                         const SkeletonGruWeights<Matrix>& w);
Matrix spatial_gru_step(const Matrix& M, const Matrix& Q_prev, const Matrix& O,
                        const SpatialGruWeights<Matrix>& w);
Matrix confidence_gate(const Matrix& h_joint, const Matrix& m_joint, const GateWeights<Matrix>& w,
                       double rho);
std::vector<Matrix> traverse_joints(const FeatureMap& F_tp, const FeatureMap& F_a,
                                    const JointTraversal& traversal,
                                    const JointAttentionWeights<Matrix>& attention,
                                    const SpatialGruWeights<Matrix>& spatial, double tau2,
                                    TraversalTrace* trace = nullptr);

}  // namespace scrnn
