#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scrnn/config.hpp"
#include "scrnn/error.hpp"
#include "scrnn/skeleton.hpp"

namespace scrnn::cli {

inline constexpr const char* kToolName = "scrnn";
inline constexpr const char* kToolVersion = "0.1.0";

/// Exit status for each error category.
int exit_code(ErrorCategory c);

/// How a command picks up its TrainConfig.
struct ConfigSource {
  std::string path;                    // JSON config or a run manifest; empty means defaults
  std::vector<std::string> overrides;  // key=value
  std::optional<int> threads;
  bool deterministic = false;          // forces ordered reduction when set
};

TrainConfig resolve_config(const ConfigSource& src);

/// Every *.csv under `path` (sorted by name), or `path` itself when it is a file.
std::vector<std::filesystem::path> data_files(const std::filesystem::path& path);
std::vector<SkeletonSequence> load_dataset(const std::vector<std::filesystem::path>& files,
                                           const TrainConfig& cfg);

struct TrainArgs {
  ConfigSource config;
  std::string data;
  std::string out_dir;
};
int cmd_train(const TrainArgs& args, std::ostream& out);

struct PredictArgs {
  std::string checkpoint;
  std::string input;
  std::optional<int> horizon;
  std::string out;
};
int cmd_predict(const PredictArgs& args, std::ostream& out);

struct EvalArgs {
  std::string pred;
  std::string truth;
  std::vector<double> horizons_ms;  // empty: standard horizons that fit
  double frame_interval_ms = 40.0;
  std::string tag = "prediction";
  std::string csv_out;
  int precision = 4;
};
int cmd_eval(const EvalArgs& args, std::ostream& out);

struct GradCheckArgs {
  ConfigSource config;
  std::uint64_t seed = 1;
};
int cmd_gradcheck(const GradCheckArgs& args, std::ostream& out);

struct AblateArgs {
  ConfigSource config;
  std::string data;  // empty: synthetic data from the config
  std::string markdown_out;
  std::string csv_out;
};
int cmd_ablate(const AblateArgs& args, std::ostream& out);

struct SynthArgs {
  ConfigSource config;
  std::string out_dir;
};
int cmd_synth(const SynthArgs& args, std::ostream& out);

}  // namespace scrnn::cli
