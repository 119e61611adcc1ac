#include "scrnn/sc_gru.hpp"

#include <string>

#include "scrnn/attention.hpp"
#include "scrnn/cells.hpp"
#include "scrnn/error.hpp"

namespace scrnn {

using ad::Var;

Variant parse_variant(std::string_view name) {
  if (name == "full") return Variant::full;
  if (name == "no_sca") return Variant::no_sca;
  if (name == "no_skel_attn") return Variant::no_skel_attn;
  if (name == "no_joint_attn") return Variant::no_joint_attn;
  throw ConfigError("unknown variant '" + std::string(name) +
                    "'; expected one of: full, no_sca, no_skel_attn, no_joint_attn");
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::no_sca: return "no_sca";
    case Variant::no_skel_attn: return "no_skel_attn";
    case Variant::no_joint_attn: return "no_joint_attn";
  }
  return "full";
}

bool forces_skeleton_factors(Variant v) { return v == Variant::no_sca || v == Variant::no_skel_attn; }
bool forces_joint_factors(Variant v) { return v == Variant::no_sca || v == Variant::no_joint_attn; }

InitMode parse_init_mode(std::string_view name) {
  if (name == "encoder") return InitMode::encoder;
  if (name == "zero") return InitMode::zero;
  throw ConfigError("unknown init_mode '" + std::string(name) + "'; expected one of: encoder, zero");
}

std::string_view to_string(InitMode m) { return m == InitMode::encoder ? "encoder" : "zero"; }

namespace {

SkeletonAttentionNodes attend(const ModelWeights<Var>& w, const ModelConfig& cfg, Var F, Var h_prev,
                              const StepOverride* ov) {
  ad::Tape& t = F.tape();
  if (ov && ov->skeleton) return skeleton_attention_with_factors(F, t.leaf(*ov->skeleton));
  if (forces_skeleton_factors(cfg.variant)) {
    return skeleton_attention_with_factors(F, t.leaf(Matrix(1, F.cols(), 1.0)));
  }
  return skeleton_attention(F, h_prev, w.skeleton_attention, cfg.tau1);
}

Var to_skeleton_space(const ModelWeights<Var>& w, Var h) {
  return present(w.P_out) ? ad::matmul(w.P_out, h) : h;
}

void check_observed(const ModelWeights<Var>& w, Var F) {
  if (F.cols() + 1 != w.spatial_gru.B_z.cols()) {
    throw ShapeError("observed window has " + std::to_string(F.cols()) +
                     " frames but the parameters expect " +
                     std::to_string(w.spatial_gru.B_z.cols() - 1));
  }
  if (F.rows() != w.gate.W_fh.rows()) {
    throw ShapeError("observed frames have " + std::to_string(F.rows()) +
                     " values but the parameters expect " + std::to_string(w.gate.W_fh.rows()));
  }
}

}  // namespace

StepNodes sc_gru_step(const ModelWeights<Var>& w, const ModelConfig& cfg, Var F, Var x_tilde,
                      Var h_prev, const StepOverride* ov, StepTrace* trace) {
  check_observed(w, F);
  const std::size_t T = F.cols();
  const int joints = static_cast<int>(F.rows() / 3);

  SkeletonAttentionNodes sa = attend(w, cfg, F, h_prev, ov);
  Var h = skeleton_gru_step(x_tilde, h_prev, sa.context, w.skeleton_gru);
  const Var columns[] = {F, to_skeleton_space(w, h)};
  Var F_tp = ad::hcat(columns);

  JointFactorSource factors;
  factors.force_unit = forces_joint_factors(cfg.variant);
  if (ov) factors.overrides = &ov->joint;
  if (trace) factors.record = &trace->joint_alphas;
  std::vector<Var> Q = traverse_joints(F_tp, sa.attended, cfg.traversal, w.joint_attention,
                                       w.spatial_gru, cfg.tau2, factors);

  std::vector<Var> q_last;
  std::vector<Var> m_last;
  for (int k = 1; k <= joints; ++k) {
    q_last.push_back(ad::slice_cols(Q[static_cast<std::size_t>(k - 1)], T, 1));
    m_last.push_back(ad::slice_cols(ad::slice_rows(F_tp, static_cast<std::size_t>(3 * (k - 1)), 3), T, 1));
  }
  Var h_joint = ad::vcat(q_last);
  Var m_joint = ad::vcat(m_last);
  Var gamma = confidence_gate(h_joint, m_joint, w.gate, cfg.rho);
  Var x_next = ad::scale(ad::add(to_skeleton_space(w, h), ad::mul(gamma, h_joint)), 0.5);

  if (trace) {
    trace->skeleton_alphas = sa.alphas.value();
    trace->gamma = gamma.value();
    trace->h_joint = h_joint.value();
  }
  return {x_next, h, gamma, std::move(Q)};
}

Var initial_hidden(const ModelWeights<Var>& w, const ModelConfig& cfg, Var F) {
  check_observed(w, F);
  ad::Tape& t = F.tape();
  Var h = t.leaf(Matrix(w.skeleton_gru.W_zh.rows(), 1));
  if (cfg.init == InitMode::zero) return h;
  for (std::size_t j = 0; j + 1 < F.cols(); ++j) {
    SkeletonAttentionNodes sa = attend(w, cfg, F, h, nullptr);
    h = skeleton_gru_step(ad::slice_cols(F, j, 1), h, sa.context, w.skeleton_gru);
  }
  return h;
}

std::vector<Var> rollout(const ModelWeights<Var>& w, const ModelConfig& cfg, Var F, int horizon,
                         std::vector<StepTrace>* traces) {
  if (horizon < 1) throw ArgumentError("rollout horizon must be >= 1, got " + std::to_string(horizon));
  Var h = initial_hidden(w, cfg, F);
  Var x = ad::slice_cols(F, F.cols() - 1, 1);
  std::vector<Var> out;
  out.reserve(static_cast<std::size_t>(horizon));
  for (int step = 1; step <= horizon; ++step) {
    StepTrace* trace = nullptr;
    if (traces) trace = &traces->emplace_back();
    StepNodes s = sc_gru_step(w, cfg, F, x, h, nullptr, trace);
    out.push_back(s.x_next);
    x = s.x_next;
    h = s.h;
  }
  return out;
}

ScGruState initial_state(const FeatureMap& F, const ParameterSet& params, const ModelConfig& cfg) {
  ad::Tape t;
  auto w = bind(t, params);
  Var f = t.leaf(F.matrix);
  return {initial_hidden(w, cfg, f).value(), {}, F.matrix.col(F.cols() - 1)};
}

StepResult sc_gru_step(const FeatureMap& F, const ScGruState& state, const ParameterSet& params,
                       const ModelConfig& cfg, const StepOverride* ov, StepTrace* trace) {
  ad::Tape t;
  auto w = bind(t, params);
  StepNodes s = sc_gru_step(w, cfg, t.leaf(F.matrix), t.leaf(state.x_tilde), t.leaf(state.h), ov,
                            trace);
  ScGruState next{s.h.value(), {}, s.x_next.value()};
  for (Var q : s.joint_states) next.Q.push_back(q.value());
  return {s.x_next.value(), std::move(next)};
}

SkeletonSequence rollout(const SkeletonSequence& observed, int horizon, const ParameterSet& params,
                         const ModelConfig& cfg) {
  const auto T = static_cast<std::size_t>(params.shape.observed);
  if (observed.joints() != params.shape.joints) {
    throw ShapeError("input has " + std::to_string(observed.joints()) +
                     " joints, parameters expect " + std::to_string(params.shape.joints));
  }
  if (observed.length() < T) {
    throw DataError("need at least " + std::to_string(T) + " observed frames, got " +
                    std::to_string(observed.length()));
  }
  FeatureMap F = build_feature_map(observed, observed.length() - T + 1, observed.length());
  ad::Tape t;
  auto w = bind(t, params);
  auto preds = rollout(w, cfg, t.leaf(F.matrix), horizon);
  std::vector<std::vector<double>> frames;
  frames.reserve(preds.size());
  for (Var p : preds) frames.emplace_back(p.value().data().begin(), p.value().data().end());
  return SkeletonSequence(observed.joints(), std::move(frames), observed.frame_interval_ms());
}

}  // namespace scrnn
