#pragma once

#include <filesystem>
#include <string>

#include "scrnn/params.hpp"

namespace scrnn {

/// Text key -> matrix store. Layout:
///
///   scrnn-checkpoint 1
///   shape <K> <T> <n> <a>
///   config <single-line JSON, may be {}>
///   param <name> <rows> <cols>
///   <one line per row, hex-float values>
///   ...
///   end
///
/// Values are written as C99 hex floats, so a save/load round trip is bitwise exact.
struct Checkpoint {
  ParameterSet params;
  std::string config_json = "{}";

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint parse_checkpoint(const std::string& text, const std::string& source = "<memory>");

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace scrnn
