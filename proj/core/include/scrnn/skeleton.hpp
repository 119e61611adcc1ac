#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "scrnn/matrix.hpp"

namespace scrnn {

/// Frames of K joints, each joint an angle-axis triple, stored joint-major:
/// (k1x k1y k1z k2x ...). Joint ids are 1-based throughout the public API.
class SkeletonSequence {
 public:
  SkeletonSequence(int joints, std::vector<std::vector<double>> frames,
                   double frame_interval_ms = 40.0);

  int joints() const noexcept { return joints_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(3 * joints_); }
  std::size_t length() const noexcept { return frames_.size(); }
  double frame_interval_ms() const noexcept { return frame_interval_ms_; }

  /// 1-based frame access.
  const std::vector<double>& frame(std::size_t t) const;
  const std::vector<std::vector<double>>& frames() const noexcept { return frames_; }

  /// Frames [first, first + count), 1-based.
  SkeletonSequence slice(std::size_t first, std::size_t count) const;

  friend bool operator==(const SkeletonSequence&, const SkeletonSequence&) = default;

 private:
  int joints_;
  std::vector<std::vector<double>> frames_;
  double frame_interval_ms_;
};

/// Identifies a feature-map column: an observed frame t, or the prediction step t'.
struct ColumnTime {
  bool predicted = false;
  int step = 0;

  friend bool operator==(const ColumnTime&, const ColumnTime&) = default;
};

/// d x T (or d x (T+1)) matrix whose column j is the skeleton at column_times[j].
/// Row r (0-based) belongs to joint r/3 + 1, coordinate r%3.
struct FeatureMap {
  Matrix matrix;
  std::vector<ColumnTime> column_times;

  int joints() const noexcept { return static_cast<int>(matrix.rows() / 3); }
  std::size_t dim() const noexcept { return matrix.rows(); }
  std::size_t cols() const noexcept { return matrix.cols(); }
};

/// Columns are frames first..last (1-based, inclusive).
FeatureMap build_feature_map(const SkeletonSequence& seq, std::size_t first, std::size_t last);
FeatureMap build_feature_map(const SkeletonSequence& seq);

/// [F, h] with the new column tagged as prediction step `step`.
FeatureMap append_state(const FeatureMap& f, const Matrix& h, int step);

/// The three coordinate rows of joint k (1-based).
Matrix joint_rows(const FeatureMap& f, int k);

enum class TraversalKind { id, traveling, surrounding, custom };

struct JointTraversal {
  TraversalKind kind = TraversalKind::id;
  std::string name;
  std::vector<int> order;  // 1-based joint ids, repeats allowed

  /// Throws DataError unless every entry is in [1, joints] and every joint appears.
  void validate(int joints) const;
};

/// Builtin names: "id" (any K), "traveling", "surrounding", "traveling_fixed" (K = 17).
JointTraversal builtin_traversal(std::string_view name, int joints = 17);
JointTraversal custom_traversal(std::vector<int> order, int joints);

}  // namespace scrnn
