#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>

#include "scrnn/matrix.hpp"
#include "scrnn/tape.hpp"

namespace scrnn {

/// Sizes that fix every weight shape.
struct ModelShape {
  int joints = 0;            // K
  int observed = 0;          // T; spatial biases have T + 1 columns
  int hidden = 0;            // n; the skeleton GRU state width
  int attention = 0;         // a; attention hidden width

  std::size_t dim() const noexcept { return static_cast<std::size_t>(3 * joints); }
  bool projected() const noexcept { return static_cast<std::size_t>(hidden) != dim(); }

  friend bool operator==(const ModelShape&, const ModelShape&) = default;
};

/// Temporal (skeleton) attention scoring weights.
template <class T>
struct SkeletonAttentionWeights {
  T U_eh;  // a x n
  T U_ef;  // a x d
  T w_e;   // a x 1
  T b_e;   // a x 1

  friend bool operator==(const SkeletonAttentionWeights&, const SkeletonAttentionWeights&) = default;
};

/// Spatial (joint) attention scoring weights; one bias shared by all joints.
template <class T>
struct JointAttentionWeights {
  T U_cb;  // a x 3
  T U_cm;  // a x 3
  T w_c;   // a x 1
  T b_l;   // a x 1

  friend bool operator==(const JointAttentionWeights&, const JointAttentionWeights&) = default;
};

template <class T>
struct SkeletonGruWeights {
  T W_zx, W_zh, W_za;
  T W_rx, W_rh, W_ra;
  T W_cx, W_ch;
  T b_z, b_r, b_c;

  friend bool operator==(const SkeletonGruWeights&, const SkeletonGruWeights&) = default;
};

template <class T>
struct SpatialGruWeights {
  T W_zm, W_zq, W_zo;
  T W_rm, W_rq, W_ro;
  T W_cm, W_cq;
  T B_z, B_r, B_c;  // 3 x (T + 1)

  friend bool operator==(const SpatialGruWeights&, const SpatialGruWeights&) = default;
};

template <class T>
struct GateWeights {
  T W_fh, W_fm;  // d x d
  T b_h, b_m;

  friend bool operator==(const GateWeights&, const GateWeights&) = default;
};

template <class T>
struct ModelWeights {
  SkeletonAttentionWeights<T> skeleton_attention;
  JointAttentionWeights<T> joint_attention;
  SkeletonGruWeights<T> skeleton_gru;
  SpatialGruWeights<T> spatial_gru;
  GateWeights<T> gate;
  T P_out;  // d x n; present only when n != d

  friend bool operator==(const ModelWeights&, const ModelWeights&) = default;
};

inline bool present(const Matrix& m) { return !m.empty(); }
inline bool present(const ad::Var& v) { return v.valid(); }

/// Calls fn(name, field) for every present weight in canonical order.
template <class W, class Fn>
void visit_weights(W& w, Fn&& fn) {
  auto& sa = w.skeleton_attention;
  fn(std::string_view("U_eh"), sa.U_eh);
  fn(std::string_view("U_ef"), sa.U_ef);
  fn(std::string_view("w_e"), sa.w_e);
  fn(std::string_view("b_e"), sa.b_e);
  auto& ja = w.joint_attention;
  fn(std::string_view("U_cb"), ja.U_cb);
  fn(std::string_view("U_cm"), ja.U_cm);
  fn(std::string_view("w_c"), ja.w_c);
  fn(std::string_view("b_l"), ja.b_l);
  auto& sg = w.skeleton_gru;
  fn(std::string_view("W_zx"), sg.W_zx);
  fn(std::string_view("W_zh"), sg.W_zh);
  fn(std::string_view("W_za"), sg.W_za);
  fn(std::string_view("W_rx"), sg.W_rx);
  fn(std::string_view("W_rh"), sg.W_rh);
  fn(std::string_view("W_ra"), sg.W_ra);
  fn(std::string_view("W_cx"), sg.W_cx);
  fn(std::string_view("W_ch"), sg.W_ch);
  fn(std::string_view("b_z"), sg.b_z);
  fn(std::string_view("b_r"), sg.b_r);
  fn(std::string_view("b_c"), sg.b_c);
  auto& pg = w.spatial_gru;
  fn(std::string_view("W_zm"), pg.W_zm);
  fn(std::string_view("W_zq"), pg.W_zq);
  fn(std::string_view("W_zo"), pg.W_zo);
  fn(std::string_view("W_rm"), pg.W_rm);
  fn(std::string_view("W_rq"), pg.W_rq);
  fn(std::string_view("W_ro"), pg.W_ro);
  fn(std::string_view("W_cm"), pg.W_cm);
  fn(std::string_view("W_cq"), pg.W_cq);
  fn(std::string_view("B_z"), pg.B_z);
  fn(std::string_view("B_r"), pg.B_r);
  fn(std::string_view("B_c"), pg.B_c);
  auto& g = w.gate;
  fn(std::string_view("W_fh"), g.W_fh);
  fn(std::string_view("W_fm"), g.W_fm);
  fn(std::string_view("b_h"), g.b_h);
  fn(std::string_view("b_m"), g.b_m);
  if (present(w.P_out)) fn(std::string_view("P_out"), w.P_out);
}

struct ParameterSet {
  ModelShape shape;
  ModelWeights<Matrix> weights;

  std::size_t scalar_count() const;
  /// Throws ShapeError if any weight disagrees with `shape`.
  void validate() const;

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

/// Expected (rows, cols) for a named weight.
std::pair<std::size_t, std::size_t> expected_shape(const ModelShape& shape, std::string_view name);

/// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)]; biases zero except the update-gate
/// biases b_z and B_z, which start at +1.
ParameterSet initialize_parameters(const ModelShape& shape, std::uint64_t seed);

ParameterSet zeros_like(const ParameterSet& p);

/// Places every weight on the tape as a leaf.
ModelWeights<ad::Var> bind(ad::Tape& tape, const ParameterSet& p);

/// Reads the adjoint of each bound weight into a ParameterSet of p's shape.
ParameterSet collect_gradients(const ad::Gradients& grads, const ModelWeights<ad::Var>& vars,
                               const ParameterSet& p);

}  // namespace scrnn
