#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace scrnn::cli {

/// sha1("blob <size>\0" + bytes), lowercase hex, as `git hash-object` prints it.
std::string git_blob_hash(const std::string& bytes);

/// Hash of a flat git tree (mode 100644) over the given files, keyed by file name.
/// A single regular file hashes as a blob.
std::string git_content_hash(const std::vector<std::filesystem::path>& files);

}  // namespace scrnn::cli
