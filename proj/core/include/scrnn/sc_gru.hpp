#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "scrnn/matrix.hpp"
#include "scrnn/params.hpp"
#include "scrnn/skeleton.hpp"
#include "scrnn/tape.hpp"

namespace scrnn {

/// Ablations force attention factors to 1:
///   no_skel_attn  - every skeleton factor alpha^e_j
///   no_joint_attn - every joint factor alpha^k_l
///   no_sca        - both
enum class Variant { full, no_sca, no_skel_attn, no_joint_attn };

Variant parse_variant(std::string_view name);
std::string_view to_string(Variant v);
bool forces_skeleton_factors(Variant v);
bool forces_joint_factors(Variant v);

/// How h_0 is produced: zero, or by running the skeleton GRU over observed
/// frames 1..T-1 (frame T then enters as the first input x~_0).
enum class InitMode { encoder, zero };

InitMode parse_init_mode(std::string_view name);
std::string_view to_string(InitMode m);

struct ModelConfig {
  double tau1 = 1.0;
  double tau2 = 1.0;
  double rho = 1.0;
  Variant variant = Variant::full;
  JointTraversal traversal;
  InitMode init = InitMode::encoder;
};

/// Replaces computed attention factors for one step. Joint factors are keyed
/// by target joint id.
struct StepOverride {
  std::optional<Matrix> skeleton;
  std::map<int, Matrix> joint;
};

struct StepTrace {
  Matrix skeleton_alphas;
  std::map<int, Matrix> joint_alphas;
  Matrix gamma;
  Matrix h_joint;
};

struct StepNodes {
  ad::Var x_next;                    // d x 1
  ad::Var h;                         // n x 1, skeleton motion state
  ad::Var gamma;                     // d x 1
  std::vector<ad::Var> joint_states; // Q_k per joint, 3 x (T+1)
};

/// One prediction step: skeleton attention -> skeleton GRU -> [F, h] ->
/// joint traversal -> confidence gate -> x_next = (h + gamma . h_joint) / 2.
StepNodes sc_gru_step(const ModelWeights<ad::Var>& w, const ModelConfig& cfg, ad::Var F,
                      ad::Var x_tilde, ad::Var h_prev,
                      const StepOverride* override_factors = nullptr, StepTrace* trace = nullptr);

/// h_0 per cfg.init.
ad::Var initial_hidden(const ModelWeights<ad::Var>& w, const ModelConfig& cfg, ad::Var F);

/// Self-fed predictions x~_1..x~_horizon from the observed map F (d x T).
std::vector<ad::Var> rollout(const ModelWeights<ad::Var>& w, const ModelConfig& cfg, ad::Var F,
                             int horizon, std::vector<StepTrace>* traces = nullptr);

// Value-level interface.

struct ScGruState {
  Matrix h;
  std::vector<Matrix> Q;  // empty before the first step
  Matrix x_tilde;
};

ScGruState initial_state(const FeatureMap& F, const ParameterSet& params, const ModelConfig& cfg);

struct StepResult {
  Matrix x_next;
  ScGruState state;
};

StepResult sc_gru_step(const FeatureMap& F, const ScGruState& state, const ParameterSet& params,
                       const ModelConfig& cfg,
                       const StepOverride* override_factors = nullptr, StepTrace* trace = nullptr);

/// Predicts `horizon` frames after the last params.shape.observed frames of `observed`.
SkeletonSequence rollout(const SkeletonSequence& observed, int horizon, const ParameterSet& params,
                         const ModelConfig& cfg);

}  // namespace scrnn
