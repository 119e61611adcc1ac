#include "scrnn/gradcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "scrnn/error.hpp"
#include "scrnn/loss.hpp"
#include "scrnn/optimizer.hpp"
#include "scrnn/sc_gru.hpp"
#include "scrnn/synth.hpp"

namespace scrnn {

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::fabs(analytic), std::fabs(numeric), floor});
  return std::fabs(analytic - numeric) / denom;
}

std::string GradCheckReport::to_text(double threshold) const {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %8s %14s %14s\n", "group", "checked", "max_rel_err", "max_abs_err");
  out += buf;
  for (const auto& g : groups) {
    std::snprintf(buf, sizeof buf, "%-8s %8zu %14.6e %14.6e\n", g.name.c_str(), g.checked, g.max_rel_error,
                  g.max_abs_error);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "max relative error %.6e over %zu entries (threshold %.1e): %s\n",
                max_rel_error, checked, threshold, passed(threshold) ? "PASS" : "FAIL");
  out += buf;
  return out;
}

namespace {

double evaluate_loss(const ParameterSet& p, const LossBuilder& build) {
  ad::Tape tape;
  const auto w = bind(tape, p);
  const ad::Var loss = build(tape, w);
  if (loss.rows() != 1 || loss.cols() != 1) throw ArgumentError("loss builder must return a 1x1 value");
  return loss.value()[0];
}

}  // namespace

GradCheckReport check_gradients(const ParameterSet& params, const LossBuilder& build, double h,
                                std::size_t sample, std::uint64_t seed, const GradientHook& hook) {
  if (!(h > 0.0)) throw ParameterError("finite-difference step must be positive");
  const auto t0 = std::chrono::steady_clock::now();

  ParameterSet analytic;
  {
    ad::Tape tape;
    const auto w = bind(tape, params);
    const ad::Var loss = build(tape, w);
    analytic = collect_gradients(ad::backward(tape, loss), w, params);
  }
  if (hook) hook(analytic);

  std::vector<std::string> names;
  visit_weights(params.weights, [&](std::string_view n, const Matrix&) { names.emplace_back(n); });

  ParameterSet probe = params;
  auto pw = weight_list(probe);
  const auto aw = weight_list(std::as_const(analytic));

  // (weight, entry) pairs to visit
  std::vector<std::pair<std::size_t, std::size_t>> entries;
  for (std::size_t i = 0; i < pw.size(); ++i) {
    for (std::size_t j = 0; j < pw[i]->size(); ++j) entries.emplace_back(i, j);
  }
  if (sample > 0 && sample < entries.size()) {
    std::mt19937_64 rng(seed);
    std::shuffle(entries.begin(), entries.end(), rng);
    entries.resize(sample);
    std::sort(entries.begin(), entries.end());
  }

  GradCheckReport report;
  report.groups.resize(pw.size());
  for (std::size_t i = 0; i < pw.size(); ++i) report.groups[i].name = names[i];

  for (const auto& [i, j] : entries) {
    double& x = (*pw[i])[j];
    const double saved = x;
    x = saved + h;
    const double up = evaluate_loss(probe, build);
    x = saved - h;
    const double down = evaluate_loss(probe, build);
    x = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double a = (*aw[i])[j];
    auto& g = report.groups[i];
    ++g.checked;
    g.max_abs_error = std::max(g.max_abs_error, std::fabs(a - numeric));
    g.max_rel_error = std::max(g.max_rel_error, relative_error(a, numeric));
  }
  for (const auto& g : report.groups) {
    report.checked += g.checked;
    report.max_rel_error = std::max(report.max_rel_error, g.max_rel_error);
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

GradCheckReport grad_check(const TrainConfig& cfg, std::uint64_t instance_seed, const GradientHook& hook) {
  const auto& g = cfg.gradcheck;
  const int K = g.joints;
  TrainConfig small = cfg;
  small.observed = g.observed;
  small.horizon = g.horizon;
  const ModelShape shape = model_shape(small, K);
  const ModelConfig model = model_config(small, K);
  const ParameterSet params = initialize_parameters(shape, instance_seed);

  const auto frames = static_cast<std::size_t>(g.observed + g.horizon);
  const SkeletonSequence seq = synth_generate(SynthKind::sinusoid, K, std::max<std::size_t>(frames, 4),
                                              instance_seed ^ 0xabcdefULL);
  const FeatureMap F = build_feature_map(seq, 1, static_cast<std::size_t>(g.observed));
  std::vector<Matrix> truth;
  for (int t = 1; t <= g.horizon; ++t) {
    truth.push_back(Matrix::column(seq.frame(static_cast<std::size_t>(g.observed + t))));
  }
  const double tau = small.rbf_tau.median ? median_pairwise_distance(truth) : small.rbf_tau.value;
  const CoefficientMatrix coeffs = coefficient_matrix(truth, tau);
  const double divisor = small.loss_normalization == LossNormalization::horizon
                             ? static_cast<double>(g.horizon)
                             : static_cast<double>(g.observed);

  LossBuilder build = [&](ad::Tape& tape, const ModelWeights<ad::Var>& w) {
    const auto preds = rollout(w, model, tape.leaf(F.matrix), g.horizon);
    return gram_loss(preds, truth, coeffs, divisor);
  };
  return check_gradients(params, build, g.step, static_cast<std::size_t>(g.sample), instance_seed, hook);
}

}  // namespace scrnn
