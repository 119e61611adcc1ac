#include "scrnn/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scrnn/error.hpp"

namespace scrnn {

using nlohmann::json;

namespace {

const std::set<std::string> kTopKeys = {
    "observed",   "horizon",       "batch_size",       "epochs",       "learning_rate",
    "decay_rate", "momentum",      "clip_norm",        "tau1",         "tau2",
    "rho",        "rbf_tau",       "loss",             "loss_normalization",
    "traversal",  "variant",       "init_mode",        "hidden_size",  "attention_width",
    "seed",       "window_stride", "threads",          "deterministic",
    "frame_interval_ms",           "horizons_ms",      "validation_fraction",
    "joint_selection",             "synth",            "gradcheck"};
const std::set<std::string> kSynthKeys = {"kind", "joints", "frames", "count", "seed"};
const std::set<std::string> kGradCheckKeys = {"joints", "observed", "horizon", "step",
                                              "threshold", "sample", "seed"};

std::string join(const std::set<std::string>& keys) {
  std::string out;
  for (const auto& k : keys) {
    if (!out.empty()) out += ", ";
    out += k;
  }
  return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown config key '" + prefix + key + "'; allowed keys: " + join(allowed));
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& prefix = "") {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + prefix + key + "' has the wrong type: " + it->dump());
  }
}

std::string read_name(const json& obj, const char* key, const std::string& fallback) {
  std::string v = fallback;
  read(obj, key, v);
  return v;
}

}  // namespace

TrainConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j, kTopKeys, "");

  TrainConfig c;
  read(j, "observed", c.observed);
  read(j, "horizon", c.horizon);
  read(j, "batch_size", c.batch_size);
  read(j, "epochs", c.epochs);
  read(j, "learning_rate", c.learning_rate);
  read(j, "decay_rate", c.decay_rate);
  read(j, "momentum", c.momentum);
  read(j, "clip_norm", c.clip_norm);
  read(j, "tau1", c.tau1);
  read(j, "tau2", c.tau2);
  read(j, "rho", c.rho);
  if (auto it = j.find("rbf_tau"); it != j.end()) {
    if (it->is_string() && *it == "median") {
      c.rbf_tau = {true, 1.0};
    } else if (it->is_number()) {
      c.rbf_tau = {false, it->get<double>()};
    } else {
      throw ConfigError("config key 'rbf_tau' must be \"median\" or a positive number, got " + it->dump());
    }
  }
  c.loss = parse_loss_kind(read_name(j, "loss", std::string(to_string(c.loss))));
  c.loss_normalization = parse_loss_normalization(
      read_name(j, "loss_normalization", std::string(to_string(c.loss_normalization))));
  if (auto it = j.find("traversal"); it != j.end()) {
    if (it->is_array()) {
      c.traversal = "custom";
      read(j, "traversal", c.traversal_order);
    } else if (it->is_string()) {
      c.traversal = it->get<std::string>();
      const std::set<std::string> names = {"id", "traveling", "surrounding", "traveling_fixed"};
      if (!names.contains(c.traversal)) {
        throw ConfigError("config key 'traversal' has unknown value '" + c.traversal +
                          "'; allowed values: id, traveling, surrounding, traveling_fixed, or a list of joint ids");
      }
    } else {
      throw ConfigError("config key 'traversal' must be a name or a list of joint ids");
    }
  }
  c.variant = parse_variant(read_name(j, "variant", std::string(to_string(c.variant))));
  c.init_mode = parse_init_mode(read_name(j, "init_mode", std::string(to_string(c.init_mode))));
  read(j, "hidden_size", c.hidden_size);
  read(j, "attention_width", c.attention_width);
  read(j, "seed", c.seed);
  read(j, "window_stride", c.window_stride);
  read(j, "threads", c.threads);
  read(j, "deterministic", c.deterministic);
  read(j, "frame_interval_ms", c.frame_interval_ms);
  read(j, "horizons_ms", c.horizons_ms);
  read(j, "validation_fraction", c.validation_fraction);
  if (auto it = j.find("joint_selection"); it != j.end() && !it->is_null()) {
    std::vector<int> sel;
    read(j, "joint_selection", sel);
    c.joint_selection = std::move(sel);
  }
  if (auto it = j.find("synth"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("config key 'synth' must be an object");
    reject_unknown(*it, kSynthKeys, "synth.");
    c.synth.kind = parse_synth_kind(read_name(*it, "kind", std::string(to_string(c.synth.kind))));
    read(*it, "joints", c.synth.joints, "synth.");
    read(*it, "frames", c.synth.frames, "synth.");
    read(*it, "count", c.synth.count, "synth.");
    read(*it, "seed", c.synth.seed, "synth.");
  }
  if (auto it = j.find("gradcheck"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("config key 'gradcheck' must be an object");
    reject_unknown(*it, kGradCheckKeys, "gradcheck.");
    auto& g = c.gradcheck;
    read(*it, "joints", g.joints, "gradcheck.");
    read(*it, "observed", g.observed, "gradcheck.");
    read(*it, "horizon", g.horizon, "gradcheck.");
    read(*it, "step", g.step, "gradcheck.");
    read(*it, "threshold", g.threshold, "gradcheck.");
    read(*it, "sample", g.sample, "gradcheck.");
    read(*it, "seed", g.seed, "gradcheck.");
  }
  validate(c);
  return c;
}

TrainConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const TrainConfig& c, bool pretty) {
  json j;
  j["observed"] = c.observed;
  j["horizon"] = c.horizon;
  j["batch_size"] = c.batch_size;
  j["epochs"] = c.epochs;
  j["learning_rate"] = c.learning_rate;
  j["decay_rate"] = c.decay_rate;
  j["momentum"] = c.momentum;
  j["clip_norm"] = c.clip_norm;
  j["tau1"] = c.tau1;
  j["tau2"] = c.tau2;
  j["rho"] = c.rho;
  j["rbf_tau"] = c.rbf_tau.median ? json("median") : json(c.rbf_tau.value);
  j["loss"] = to_string(c.loss);
  j["loss_normalization"] = to_string(c.loss_normalization);
  j["traversal"] = c.traversal == "custom" ? json(c.traversal_order) : json(c.traversal);
  j["variant"] = to_string(c.variant);
  j["init_mode"] = to_string(c.init_mode);
  j["hidden_size"] = c.hidden_size;
  j["attention_width"] = c.attention_width;
  j["seed"] = c.seed;
  j["window_stride"] = c.window_stride;
  j["threads"] = c.threads;
  j["deterministic"] = c.deterministic;
  j["frame_interval_ms"] = c.frame_interval_ms;
  j["horizons_ms"] = c.horizons_ms;
  j["validation_fraction"] = c.validation_fraction;
  j["joint_selection"] = c.joint_selection ? json(*c.joint_selection) : json(nullptr);
  j["synth"] = {{"kind", to_string(c.synth.kind)},
                {"joints", c.synth.joints},
                {"frames", c.synth.frames},
                {"count", c.synth.count},
                {"seed", c.synth.seed}};
  j["gradcheck"] = {{"joints", c.gradcheck.joints},       {"observed", c.gradcheck.observed},
                    {"horizon", c.gradcheck.horizon},     {"step", c.gradcheck.step},
                    {"threshold", c.gradcheck.threshold}, {"sample", c.gradcheck.sample},
                    {"seed", c.gradcheck.seed}};
  return pretty ? j.dump(2) : j.dump();
}

void apply_override(TrainConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json j = json::parse(config_to_json(cfg));
  json* target = &j;
  std::string_view rest = key;
  while (true) {
    const auto dot = rest.find('.');
    const std::string part(rest.substr(0, dot));
    if (dot == std::string_view::npos) {
      if (!target->contains(part)) {
        throw ConfigError("unknown config key '" + key + "' in override");
      }
      (*target)[part] = value;
      break;
    }
    if (!target->contains(part) || !(*target)[part].is_object()) {
      throw ConfigError("unknown config key '" + key + "' in override");
    }
    target = &(*target)[part];
    rest.remove_prefix(dot + 1);
  }
  cfg = parse_config(j.dump());
}

void validate(const TrainConfig& c) {
  auto positive = [](const char* key, double v) {
    if (!(v > 0.0)) throw ConfigError("config key '" + std::string(key) + "' must be positive");
  };
  if (c.observed < 1) throw ConfigError("config key 'observed' must be >= 1");
  if (c.horizon < 1) throw ConfigError("config key 'horizon' must be >= 1");
  if (c.batch_size < 1) throw ConfigError("config key 'batch_size' must be >= 1");
  if (c.epochs < 0) throw ConfigError("config key 'epochs' must be >= 0");
  if (c.learning_rate < 0.0) throw ConfigError("config key 'learning_rate' must be >= 0");
  if (!(c.decay_rate > 0.0 && c.decay_rate <= 1.0)) {
    throw ConfigError("config key 'decay_rate' must lie in (0, 1]");
  }
  if (!(c.momentum >= 0.0 && c.momentum < 1.0)) throw ConfigError("config key 'momentum' must lie in [0, 1)");
  positive("tau1", c.tau1);
  positive("tau2", c.tau2);
  positive("rho", c.rho);
  if (!c.rbf_tau.median) positive("rbf_tau", c.rbf_tau.value);
  if (c.hidden_size < 0) throw ConfigError("config key 'hidden_size' must be >= 0");
  if (c.attention_width < 0) throw ConfigError("config key 'attention_width' must be >= 0");
  if (c.window_stride < 1) throw ConfigError("config key 'window_stride' must be >= 1");
  if (c.threads < 1) throw ConfigError("config key 'threads' must be >= 1");
  positive("frame_interval_ms", c.frame_interval_ms);
  for (double h : c.horizons_ms) positive("horizons_ms", h);
  if (!(c.validation_fraction >= 0.0 && c.validation_fraction < 1.0)) {
    throw ConfigError("config key 'validation_fraction' must lie in [0, 1)");
  }
  if (c.traversal == "custom" && c.traversal_order.empty()) {
    throw ConfigError("config key 'traversal' lists no joints");
  }
  if (c.synth.joints < 2) throw ConfigError("config key 'synth.joints' must be >= 2");
  if (c.synth.frames < 4) throw ConfigError("config key 'synth.frames' must be >= 4");
  if (c.synth.count < 1) throw ConfigError("config key 'synth.count' must be >= 1");
  if (c.gradcheck.joints < 2) throw ConfigError("config key 'gradcheck.joints' must be >= 2");
  if (c.gradcheck.observed < 1 || c.gradcheck.horizon < 1) {
    throw ConfigError("config keys 'gradcheck.observed' and 'gradcheck.horizon' must be >= 1");
  }
  positive("gradcheck.step", c.gradcheck.step);
  positive("gradcheck.threshold", c.gradcheck.threshold);
  if (c.gradcheck.sample < 0) throw ConfigError("config key 'gradcheck.sample' must be >= 0");
}

ModelShape model_shape(const TrainConfig& c, int joints) {
  const int d = 3 * joints;
  return {joints, c.observed, c.hidden_size > 0 ? c.hidden_size : d,
          c.attention_width > 0 ? c.attention_width : d};
}

ModelConfig model_config(const TrainConfig& c, int joints) {
  ModelConfig m;
  m.tau1 = c.tau1;
  m.tau2 = c.tau2;
  m.rho = c.rho;
  m.variant = c.variant;
  m.init = c.init_mode;
  m.traversal = c.traversal == "custom" ? custom_traversal(c.traversal_order, joints)
                                        : builtin_traversal(c.traversal, joints);
  m.traversal.validate(joints);
  return m;
}

}  // namespace scrnn
