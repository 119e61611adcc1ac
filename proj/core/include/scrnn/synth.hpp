#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "scrnn/skeleton.hpp"

namespace scrnn {

enum class SynthKind { sinusoid, walk_like };

SynthKind parse_synth_kind(std::string_view name);
std::string_view to_string(SynthKind kind);

/// Per-joint generator parameters. Coordinate c of the joint at frame t is
/// offset[c] + amplitude * sin(2*pi*t/period + phase[c]).
struct SynthJoint {
  double amplitude = 0.0;
  double period = 0.0;  // whole number of frames
  std::array<double, 3> phase{};
  std::array<double, 3> offset{};
};

/// sinusoid: independent amplitude/period/phase per joint.
/// walk_like: one gait period per sequence; joint k + K/2 moves in antiphase
/// with joint k (the arm/leg swing pairing).
std::vector<SynthJoint> synth_parameters(SynthKind kind, int joints, std::uint64_t seed);

SkeletonSequence synth_generate(SynthKind kind, int joints, std::size_t frames,
                                std::uint64_t seed, double frame_interval_ms = 40.0);

/// `count` sequences with seeds seed, seed + 1, ...
std::vector<SkeletonSequence> synth_dataset(SynthKind kind, int joints, std::size_t frames,
                                            std::size_t count, std::uint64_t seed,
                                            double frame_interval_ms = 40.0);

}  // namespace scrnn
