#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scrnn/skeleton.hpp"

namespace scrnn {

/// One frame per line, 3K comma-separated reals, joint-major. Blank lines are
/// skipped. `joint_selection` picks source joints (1-based) in the given order.
SkeletonSequence load_csv(const std::filesystem::path& path,
                          const std::optional<std::vector<int>>& joint_selection = std::nullopt,
                          double frame_interval_ms = 40.0);

SkeletonSequence parse_csv(const std::string& text,
                           const std::optional<std::vector<int>>& joint_selection = std::nullopt,
                           double frame_interval_ms = 40.0, const std::string& source = "<memory>");

/// 17 significant digits, so load_csv(save_csv(s)) == s.
std::string format_csv(const SkeletonSequence& seq);
void save_csv(const std::filesystem::path& path, const SkeletonSequence& seq);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace scrnn
