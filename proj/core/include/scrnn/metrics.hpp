#pragma once

#include <string>
#include <vector>

#include "scrnn/skeleton.hpp"

namespace scrnn {

/// Reporting horizons in milliseconds used by the standard comparison table.
inline const std::vector<double> kStandardHorizonsMs = {80, 160, 320, 400, 560, 640, 720, 1000};

/// Rounds each horizon to a whole number of frames (at least 1).
std::vector<int> horizons_to_frames(const std::vector<double>& horizons_ms, double frame_interval_ms);

/// ||pred_h - truth_h||_2 for each 1-based horizon frame h.
std::vector<double> mean_angle_error(const SkeletonSequence& pred, const SkeletonSequence& truth,
                                     const std::vector<int>& horizon_frames);

/// Averages mean_angle_error over aligned sequence pairs.
std::vector<double> mean_angle_error(const std::vector<SkeletonSequence>& pred,
                                     const std::vector<SkeletonSequence>& truth,
                                     const std::vector<int>& horizon_frames);

/// One row per tag, one column per horizon.
struct MaeTable {
  std::vector<double> horizons_ms;
  struct Row {
    std::string tag;
    std::vector<double> values;
  };
  std::vector<Row> rows;

  std::string to_markdown(int precision = 4) const;
  std::string to_csv() const;
};

}  // namespace scrnn
