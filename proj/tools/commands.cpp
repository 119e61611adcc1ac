#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "content_hash.hpp"
#include "scrnn/ablation.hpp"
#include "scrnn/checkpoint.hpp"
#include "scrnn/csv.hpp"
#include "scrnn/gradcheck.hpp"
#include "scrnn/metrics.hpp"
#include "scrnn/sc_gru.hpp"
#include "scrnn/synth.hpp"
#include "scrnn/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace scrnn::cli {

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config:
    case ErrorCategory::parameter:
    case ErrorCategory::argument: return 2;
    case ErrorCategory::data: return 3;
    case ErrorCategory::shape: return 4;
    case ErrorCategory::numeric: return 5;
    case ErrorCategory::internal: return 6;
  }
  return 6;
}

namespace {

std::string read_text(const fs::path& p, const char* what) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError(std::string("cannot open ") + what + " " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Horizons (ms) whose frame index fits within `available` frames.
std::vector<double> fitting_horizons(const std::vector<double>& ms, double interval, std::size_t available) {
  std::vector<double> out;
  for (double h : ms) {
    const auto f = horizons_to_frames({h}, interval).front();
    if (static_cast<std::size_t>(f) <= available) out.push_back(h);
  }
  return out;
}

void write_table(const MaeTable& table, const std::string& csv_out, std::ostream& out, int precision = 4) {
  out << table.to_markdown(precision);
  if (!csv_out.empty()) write_file_atomic(csv_out, table.to_csv());
}

}  // namespace

TrainConfig resolve_config(const ConfigSource& src) {
  TrainConfig cfg;
  if (!src.path.empty()) {
    const std::string text = read_text(src.path, "config");
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(src.path + " is not valid JSON: " + e.what());
    }
    if (j.is_object() && j.contains("tool") && j.contains("config")) {
      cfg = parse_config(j["config"].dump());  // run manifest
    } else {
      cfg = parse_config(text);
    }
  }
  for (const auto& o : src.overrides) apply_override(cfg, o);
  if (src.threads) {
    cfg.threads = *src.threads;
    validate(cfg);
  }
  if (src.deterministic) cfg.deterministic = true;
  return cfg;
}

std::vector<fs::path> data_files(const fs::path& path) {
  std::error_code ec;
  if (fs::is_regular_file(path, ec)) return {path};
  if (!fs::is_directory(path, ec)) throw DataError("data path " + path.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no .csv files in " + path.string());
  return files;
}

std::vector<SkeletonSequence> load_dataset(const std::vector<fs::path>& files, const TrainConfig& cfg) {
  std::vector<SkeletonSequence> data;
  data.reserve(files.size());
  for (const auto& f : files) data.push_back(load_csv(f, cfg.joint_selection, cfg.frame_interval_ms));
  return data;
}

int cmd_train(const TrainArgs& args, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  const TrainConfig cfg = resolve_config(args.config);
  if (args.data.empty()) throw ArgumentError("train needs --data");
  const auto files = data_files(args.data);
  const auto dataset = load_dataset(files, cfg);
  auto [train_set, val_set] = split_dataset(dataset, cfg.validation_fraction);

  const fs::path dir = args.out_dir.empty() ? fs::path(".") : fs::path(args.out_dir);
  fs::create_directories(dir);
  const fs::path ckpt_path = dir / "checkpoint.txt";
  const fs::path hist_path = dir / "loss.csv";
  const fs::path manifest_path = dir / "manifest.json";

  json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kToolVersion;
  manifest["command"] = "train";
  manifest["config"] = json::parse(config_to_json(cfg));
  manifest["seed"] = cfg.seed;
  manifest["data"] = {{"path", args.data},
                      {"files", files.size()},
                      {"train_sequences", train_set.size()},
                      {"validation_sequences", val_set.size()},
                      {"hash", git_content_hash(files)}};
  manifest["outputs"] = {{"checkpoint", ckpt_path.string()},
                         {"history", hist_path.string()},
                         {"manifest", manifest_path.string()}};
  manifest["started_utc"] = utc_now();
  write_file_atomic(manifest_path, manifest.dump(2) + "\n");

  TrainResult result;
  try {
    result = train(train_set, cfg, nullptr, [&](int epoch, double loss) {
      if (epoch == 1 || epoch % 10 == 0 || epoch == cfg.epochs) {
        out << "epoch " << epoch << " loss " << loss << '\n';
      }
    });
  } catch (...) {
    std::error_code ec;
    fs::remove(manifest_path, ec);
    throw;
  }

  save_checkpoint(ckpt_path, Checkpoint{result.params, config_to_json(cfg)});
  write_file_atomic(hist_path, history_to_csv(result.history));
  manifest["steps"] = result.steps;
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_file_atomic(manifest_path, manifest.dump(2) + "\n");

  out << "trained " << result.steps << " steps on " << train_set.size() << " sequences\n";
  if (!val_set.empty()) {
    std::size_t shortest = val_set.front().length();
    for (const auto& s : val_set) shortest = std::min(shortest, s.length());
    const std::size_t T = static_cast<std::size_t>(cfg.observed);
    const auto hz = shortest > T ? fitting_horizons(cfg.horizons_ms, cfg.frame_interval_ms, shortest - T)
                                 : std::vector<double>{};
    if (!hz.empty()) {
      const EvalResult e = evaluate(result.params, cfg, val_set, horizons_to_frames(hz, cfg.frame_interval_ms));
      MaeTable table{hz, {{"model", e.model}, {"zero_velocity", e.zero_velocity}}};
      out << "validation MAE (" << e.windows << " windows)\n" << table.to_markdown();
    }
  }
  out << "wrote " << ckpt_path.string() << ", " << hist_path.string() << ", " << manifest_path.string() << '\n';
  return 0;
}

int cmd_predict(const PredictArgs& args, std::ostream& out) {
  const Checkpoint ckpt = load_checkpoint(args.checkpoint);
  const TrainConfig cfg = parse_config(ckpt.config_json);
  const int K = ckpt.params.shape.joints;
  const SkeletonSequence input = load_csv(args.input, cfg.joint_selection, cfg.frame_interval_ms);
  if (input.joints() != K) {
    throw ShapeError("input " + args.input + " has " + std::to_string(input.joints()) +
                     " joints but checkpoint " + args.checkpoint + " expects " + std::to_string(K));
  }
  const int horizon = args.horizon.value_or(cfg.horizon);
  if (horizon < 1) throw ArgumentError("--horizon must be >= 1");
  const SkeletonSequence pred = rollout(input, horizon, ckpt.params, model_config(cfg, K));
  if (args.out.empty()) {
    out << format_csv(pred);
  } else {
    save_csv(args.out, pred);
    out << "wrote " << pred.length() << " frames to " << args.out << '\n';
  }
  return 0;
}

int cmd_eval(const EvalArgs& args, std::ostream& out) {
  const SkeletonSequence pred = load_csv(args.pred, std::nullopt, args.frame_interval_ms);
  const SkeletonSequence truth = load_csv(args.truth, std::nullopt, args.frame_interval_ms);
  if (pred.length() != truth.length()) {
    throw DataError("misaligned sequences: " + args.pred + " has " + std::to_string(pred.length()) +
                    " frames, " + args.truth + " has " + std::to_string(truth.length()));
  }
  if (pred.joints() != truth.joints()) {
    throw ShapeError(args.pred + " has " + std::to_string(pred.joints()) + " joints, " + args.truth +
                     " has " + std::to_string(truth.joints()));
  }
  std::vector<double> hz = args.horizons_ms;
  if (hz.empty()) {
    hz = fitting_horizons(kStandardHorizonsMs, args.frame_interval_ms, pred.length());
    if (hz.empty()) throw DataError("sequences are shorter than the first standard horizon");
  }
  MaeTable table{hz, {{args.tag, mean_angle_error(pred, truth, horizons_to_frames(hz, args.frame_interval_ms))}}};
  write_table(table, args.csv_out, out, args.precision);
  return 0;
}

int cmd_gradcheck(const GradCheckArgs& args, std::ostream& out) {
  const TrainConfig cfg = resolve_config(args.config);
  const GradCheckReport r = grad_check(cfg, args.seed);
  out << "gradcheck K=" << cfg.gradcheck.joints << " T=" << cfg.gradcheck.observed
      << " T'=" << cfg.gradcheck.horizon << " variant=" << to_string(cfg.variant)
      << " step=" << cfg.gradcheck.step << '\n'
      << r.to_text(cfg.gradcheck.threshold);
  return r.passed(cfg.gradcheck.threshold) ? 0 : 1;
}

int cmd_ablate(const AblateArgs& args, std::ostream& out) {
  const TrainConfig cfg = resolve_config(args.config);
  std::vector<SkeletonSequence> dataset;
  if (args.data.empty()) {
    dataset = synth_dataset(cfg.synth.kind, cfg.synth.joints, static_cast<std::size_t>(cfg.synth.frames),
                            static_cast<std::size_t>(cfg.synth.count), cfg.synth.seed, cfg.frame_interval_ms);
  } else {
    dataset = load_dataset(data_files(args.data), cfg);
  }
  const AblationResult r = run_ablation(dataset, cfg);
  out << r.table.to_markdown();
  if (!args.markdown_out.empty()) write_file_atomic(args.markdown_out, r.table.to_markdown());
  if (!args.csv_out.empty()) write_file_atomic(args.csv_out, r.table.to_csv());
  MaeTable baseline{r.table.horizons_ms, {{"zero_velocity", r.zero_velocity}}};
  out << "\nreference\n" << baseline.to_markdown();
  return 0;
}

int cmd_synth(const SynthArgs& args, std::ostream& out) {
  const TrainConfig cfg = resolve_config(args.config);
  if (args.out_dir.empty()) throw ArgumentError("synth needs --out");
  const auto data = synth_dataset(cfg.synth.kind, cfg.synth.joints, static_cast<std::size_t>(cfg.synth.frames),
                                  static_cast<std::size_t>(cfg.synth.count), cfg.synth.seed,
                                  cfg.frame_interval_ms);
  fs::create_directories(args.out_dir);
  char name[32];
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::snprintf(name, sizeof name, "seq_%04zu.csv", i + 1);
    save_csv(fs::path(args.out_dir) / name, data[i]);
  }
  out << "wrote " << data.size() << " " << to_string(cfg.synth.kind) << " sequences (" << cfg.synth.joints
      << " joints, " << cfg.synth.frames << " frames) to " << args.out_dir << '\n';
  return 0;
}

}  // namespace scrnn::cli
