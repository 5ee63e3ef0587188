#include "mfst/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mfst/error.hpp"

namespace mfst {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& node, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : node.items()) {
    if (!known.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read_opt(const json& node, const char* key, T& target, const std::string& where) {
  if (!node.contains(key)) return;
  try {
    target = node.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": bad value for '" + key + "': " + e.what());
  }
}

json parse_json(const std::string& text, const std::string& where) {
  try {
    json root = json::parse(text);
    if (!root.is_object()) throw ConfigError(where + ": top level must be an object");
    return root;
  } catch (const json::parse_error& e) {
    throw ConfigError(where + ": not valid JSON: " + e.what());
  }
}

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void ExperimentConfig::validate() const {
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (!(eval_fraction > 0.0 && eval_fraction < 1.0)) throw ConfigError("eval_fraction must lie in (0,1)");
  const std::size_t needed = setting == Setting::kCanonical ? 1 : 2;
  if (datasets.size() != needed) {
    throw ConfigError(std::string(to_string(setting)) + " setting needs exactly " +
                      std::to_string(needed) + " dataset(s), config lists " +
                      std::to_string(datasets.size()));
  }
  model.validate();
  if (training.epochs == 0) throw ConfigError("training.epochs must be >= 1");
  if (training.batch_size == 0) throw ConfigError("training.batch_size must be >= 1");
  if (!(training.learning_rate >= 0.0)) throw ConfigError("training.learning_rate must be >= 0");
  if (!(protocol.budget_fraction > 0.0 && protocol.budget_fraction <= 1.0)) {
    throw ConfigError("budget_fraction must lie in (0,1]");
  }
  if (threads == 0) throw ConfigError("threads must be >= 1");
}

ExperimentConfig parse_experiment_config(const std::string& text, const fs::path& base_dir) {
  const std::string where = "experiment config";
  const json root = parse_json(text, where);
  reject_unknown(root,
                 {"setting", "datasets", "repeats", "eval_fraction", "seed", "model", "training",
                  "audio_enabled", "aggregation", "budget_fraction", "output_dir", "threads"},
                 where);
  ExperimentConfig c;
  c.source_text = text;

  std::string setting = "canonical";
  read_opt(root, "setting", setting, where);
  c.setting = parse_setting(setting);
  std::vector<std::string> datasets;
  read_opt(root, "datasets", datasets, where);
  for (const std::string& d : datasets) {
    const fs::path p(d);
    c.datasets.push_back(p.is_absolute() ? p : base_dir / p);
  }
  read_opt(root, "repeats", c.repeats, where);
  read_opt(root, "eval_fraction", c.eval_fraction, where);
  read_opt(root, "seed", c.seed, where);
  read_opt(root, "audio_enabled", c.audio_enabled, where);
  read_opt(root, "budget_fraction", c.protocol.budget_fraction, where);
  read_opt(root, "threads", c.threads, where);
  std::string aggregation = "mean";
  read_opt(root, "aggregation", aggregation, where);
  c.protocol.aggregation = parse_aggregation(aggregation);
  std::string out = c.output_dir.string();
  read_opt(root, "output_dir", out, where);
  c.output_dir = fs::path(out).is_absolute() ? fs::path(out) : base_dir / out;

  if (root.contains("model")) {
    const json& m = root.at("model");
    const std::string w = where + " model";
    reject_unknown(m, {"model_dim", "heads", "encoder_layers", "decoder_layers", "ff_dim",
                       "positional_encoding", "init_std"}, w);
    read_opt(m, "model_dim", c.model.model_dim, w);
    read_opt(m, "heads", c.model.heads, w);
    read_opt(m, "encoder_layers", c.model.encoder_layers, w);
    read_opt(m, "decoder_layers", c.model.decoder_layers, w);
    read_opt(m, "ff_dim", c.model.ff_dim, w);
    read_opt(m, "positional_encoding", c.model.positional_encoding, w);
    read_opt(m, "init_std", c.model.init_std, w);
  }
  if (root.contains("training")) {
    const json& t = root.at("training");
    const std::string w = where + " training";
    reject_unknown(t, {"epochs", "learning_rate", "batch_size"}, w);
    read_opt(t, "epochs", c.training.epochs, w);
    read_opt(t, "learning_rate", c.training.learning_rate, w);
    read_opt(t, "batch_size", c.training.batch_size, w);
  }
  c.training.audio_enabled = c.audio_enabled;
  return c;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  return parse_experiment_config(read_text_file(path), path.parent_path());
}

SyntheticConfig parse_synthetic_config(const std::string& text) {
  const std::string where = "synthetic config";
  const json root = parse_json(text, where);
  reject_unknown(root,
                 {"name", "num_videos", "frames_min", "frames_max", "tokens_min", "tokens_max",
                  "visual_dim", "text_dim", "audio_dim", "seed", "audio_dependent", "annotators",
                  "annotator_noise", "score_noise", "segment_min", "segment_max"},
                 where);
  SyntheticConfig c;
  read_opt(root, "name", c.name, where);
  read_opt(root, "num_videos", c.num_videos, where);
  read_opt(root, "frames_min", c.frames_min, where);
  read_opt(root, "frames_max", c.frames_max, where);
  read_opt(root, "tokens_min", c.tokens_min, where);
  read_opt(root, "tokens_max", c.tokens_max, where);
  read_opt(root, "visual_dim", c.visual_dim, where);
  read_opt(root, "text_dim", c.text_dim, where);
  read_opt(root, "audio_dim", c.audio_dim, where);
  read_opt(root, "seed", c.seed, where);
  read_opt(root, "audio_dependent", c.audio_dependent, where);
  read_opt(root, "annotators", c.annotators, where);
  read_opt(root, "annotator_noise", c.annotator_noise, where);
  read_opt(root, "score_noise", c.score_noise, where);
  read_opt(root, "segment_min", c.segment_min, where);
  read_opt(root, "segment_max", c.segment_max, where);
  return c;
}

SyntheticConfig load_synthetic_config(const fs::path& path) {
  return parse_synthetic_config(read_text_file(path));
}

}  // namespace mfst
