#include "scrnn/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "scrnn/error.hpp"

namespace scrnn {

SynthKind parse_synth_kind(std::string_view name) {
  if (name == "sinusoid") return SynthKind::sinusoid;
  if (name == "walk_like") return SynthKind::walk_like;
  throw ConfigError("unknown synthetic data kind '" + std::string(name) +
                    "'; expected one of: sinusoid, walk_like");
}

std::string_view to_string(SynthKind kind) {
  return kind == SynthKind::sinusoid ? "sinusoid" : "walk_like";
}

std::vector<SynthJoint> synth_parameters(SynthKind kind, int joints, std::uint64_t seed) {
  if (joints < 2) throw ArgumentError("synthetic data needs at least 2 joints");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amplitude(0.2, 0.6);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> offset(-0.2, 0.2);
  std::uniform_int_distribution<int> period(8, 40);
  std::uniform_int_distribution<int> gait_period(16, 32);

  auto draw = [&](double p) {
    SynthJoint j;
    j.amplitude = amplitude(rng);
    j.period = p;
    for (double& v : j.phase) v = phase(rng);
    for (double& v : j.offset) v = offset(rng);
    return j;
  };

  std::vector<SynthJoint> out(static_cast<std::size_t>(joints));
  if (kind == SynthKind::sinusoid) {
    for (auto& j : out) j = draw(period(rng));
    return out;
  }

  const double gait = gait_period(rng);
  const int half = joints / 2;
  for (int k = 0; k < half; ++k) {
    SynthJoint lead = draw(gait);
    SynthJoint partner = draw(gait);
    for (int c = 0; c < 3; ++c) partner.phase[c] = lead.phase[c] + std::numbers::pi;
    out[static_cast<std::size_t>(k)] = lead;
    out[static_cast<std::size_t>(k + half)] = partner;
  }
  if (joints % 2 == 1) out.back() = draw(gait);
  return out;
}

SkeletonSequence synth_generate(SynthKind kind, int joints, std::size_t frames,
                                std::uint64_t seed, double frame_interval_ms) {
  if (joints < 2 || frames < 4) {
    throw ArgumentError("synthetic data needs K >= 2 and at least 4 frames, got K=" +
                        std::to_string(joints) + ", frames=" + std::to_string(frames));
  }
  const auto params = synth_parameters(kind, joints, seed);
  std::vector<std::vector<double>> out(frames, std::vector<double>(3 * static_cast<std::size_t>(joints)));
  for (std::size_t t = 0; t < frames; ++t) {
    const double time = static_cast<double>(t + 1);
    for (std::size_t k = 0; k < params.size(); ++k) {
      const auto& j = params[k];
      const double omega = 2.0 * std::numbers::pi / j.period;
      for (std::size_t c = 0; c < 3; ++c) {
        out[t][3 * k + c] = j.offset[c] + j.amplitude * std::sin(omega * time + j.phase[c]);
      }
    }
  }
  return SkeletonSequence(joints, std::move(out), frame_interval_ms);
}

std::vector<SkeletonSequence> synth_dataset(SynthKind kind, int joints, std::size_t frames,
                                            std::size_t count, std::uint64_t seed,
                                            double frame_interval_ms) {
  std::vector<SkeletonSequence> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(synth_generate(kind, joints, frames, seed + i, frame_interval_ms));
  }
  return out;
}

}  // namespace scrnn
