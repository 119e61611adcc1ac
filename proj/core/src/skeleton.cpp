#include "scrnn/skeleton.hpp"

#include <cmath>
#include <set>

#include "scrnn/error.hpp"

namespace scrnn {

SkeletonSequence::SkeletonSequence(int joints, std::vector<std::vector<double>> frames,
                                   double frame_interval_ms)
    : joints_(joints), frames_(std::move(frames)), frame_interval_ms_(frame_interval_ms) {
  if (joints_ < 2) throw DataError("a skeleton needs at least 2 joints, got " + std::to_string(joints_));
  if (frames_.empty()) throw DataError("a skeleton sequence needs at least one frame");
  if (!(frame_interval_ms_ > 0.0)) throw DataError("frame interval must be positive");
  for (std::size_t t = 0; t < frames_.size(); ++t) {
    if (frames_[t].size() != dim()) {
      throw DataError("frame " + std::to_string(t + 1) + " has " +
                      std::to_string(frames_[t].size()) + " values, expected " +
                      std::to_string(dim()));
    }
    for (double v : frames_[t]) {
      if (!std::isfinite(v)) throw DataError("frame " + std::to_string(t + 1) + " has a non-finite value");
    }
  }
}

const std::vector<double>& SkeletonSequence::frame(std::size_t t) const {
  if (t < 1 || t > frames_.size()) {
    throw ArgumentError("frame " + std::to_string(t) + " out of range [1, " +
                        std::to_string(frames_.size()) + "]");
  }
  return frames_[t - 1];
}

SkeletonSequence SkeletonSequence::slice(std::size_t first, std::size_t count) const {
  if (first < 1 || count == 0 || first - 1 + count > frames_.size()) {
    throw ArgumentError("slice [" + std::to_string(first) + ", +" + std::to_string(count) +
                        ") outside a sequence of " + std::to_string(frames_.size()) + " frames");
  }
  std::vector<std::vector<double>> out(frames_.begin() + static_cast<std::ptrdiff_t>(first - 1),
                                       frames_.begin() + static_cast<std::ptrdiff_t>(first - 1 + count));
  return SkeletonSequence(joints_, std::move(out), frame_interval_ms_);
}

FeatureMap build_feature_map(const SkeletonSequence& seq, std::size_t first, std::size_t last) {
  if (first < 1 || last < first || last > seq.length()) {
    throw ArgumentError("feature-map window [" + std::to_string(first) + ", " +
                        std::to_string(last) + "] is empty or outside 1.." +
                        std::to_string(seq.length()));
  }
  const std::size_t cols = last - first + 1;
  FeatureMap f{Matrix(seq.dim(), cols), {}};
  f.column_times.reserve(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    const auto& x = seq.frame(first + j);
    for (std::size_t r = 0; r < seq.dim(); ++r) f.matrix(r, j) = x[r];
    f.column_times.push_back({false, static_cast<int>(first + j)});
  }
  return f;
}

FeatureMap build_feature_map(const SkeletonSequence& seq) {
  return build_feature_map(seq, 1, seq.length());
}

FeatureMap append_state(const FeatureMap& f, const Matrix& h, int step) {
  if (h.size() != f.dim()) {
    throw ShapeError("append_state: state has " + std::to_string(h.size()) +
                     " entries, feature map has " + std::to_string(f.dim()) + " rows");
  }
  FeatureMap out{Matrix(f.dim(), f.cols() + 1), f.column_times};
  for (std::size_t r = 0; r < f.dim(); ++r) {
    for (std::size_t c = 0; c < f.cols(); ++c) out.matrix(r, c) = f.matrix(r, c);
    out.matrix(r, f.cols()) = h[r];
  }
  out.column_times.push_back({true, step});
  return out;
}

Matrix joint_rows(const FeatureMap& f, int k) {
  if (k < 1 || k > f.joints()) {
    throw ArgumentError("joint " + std::to_string(k) + " out of range [1, " +
                        std::to_string(f.joints()) + "]");
  }
  Matrix out(3, f.cols());
  const auto base = static_cast<std::size_t>(3 * (k - 1));
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t j = 0; j < f.cols(); ++j) out(c, j) = f.matrix(base + c, j);
  return out;
}

void JointTraversal::validate(int joints) const {
  if (order.empty()) throw DataError("traversal '" + name + "' is empty");
  std::set<int> seen;
  for (std::size_t s = 0; s < order.size(); ++s) {
    if (order[s] < 1 || order[s] > joints) {
      throw DataError("traversal '" + name + "' position " + std::to_string(s + 1) +
                      " references joint " + std::to_string(order[s]) + " outside [1, " +
                      std::to_string(joints) + "]");
    }
    seen.insert(order[s]);
  }
  for (int k = 1; k <= joints; ++k) {
    if (!seen.contains(k)) {
      throw DataError("traversal '" + name + "' never visits joint " + std::to_string(k));
    }
  }
}

namespace {

// Published orders, kept verbatim (the traveling order repeats 15 where 16 is expected).
const std::vector<int> kTraveling = {9,  8,  1,  2,  3,  4,  3,  2,  1,  5,  6,
                                     7,  6,  5,  1,  8,  9,  10, 11, 10, 9,  15,
                                     15, 17, 16, 15, 9,  12, 13, 14, 13, 12, 9};
const std::vector<int> kSurrounding = {9,  15, 16, 17, 16, 15, 9,  8,  1,  2,  3,
                                       4,  3,  2,  1,  5,  6,  7,  6,  5,  1,  8,
                                       9,  12, 13, 14, 13, 12, 9,  10, 11, 10, 9};

}  // namespace

JointTraversal builtin_traversal(std::string_view name, int joints) {
  if (name == "id") {
    if (joints < 2) throw DataError("id traversal needs at least 2 joints");
    JointTraversal t{TraversalKind::id, "id", {}};
    for (int k = 1; k <= joints; ++k) t.order.push_back(k);
    return t;
  }
  const bool is_builtin_body =
      name == "traveling" || name == "surrounding" || name == "traveling_fixed";
  if (!is_builtin_body) {
    throw ConfigError("unknown traversal '" + std::string(name) +
                      "'; expected one of: id, traveling, surrounding, traveling_fixed");
  }
  if (joints != 17) {
    throw DataError("traversal '" + std::string(name) + "' is defined for 17 joints, got " +
                    std::to_string(joints));
  }
  if (name == "traveling") return {TraversalKind::traveling, "traveling", kTraveling};
  if (name == "surrounding") return {TraversalKind::surrounding, "surrounding", kSurrounding};

  std::vector<int> fixed = kTraveling;
  fixed[22] = 16;  // "15, 15, 17, 16" -> "15, 16, 17, 16"
  return {TraversalKind::custom, "traveling_fixed", std::move(fixed)};
}

JointTraversal custom_traversal(std::vector<int> order, int joints) {
  JointTraversal t{TraversalKind::custom, "custom", std::move(order)};
  t.validate(joints);
  return t;
}

}  // namespace scrnn
