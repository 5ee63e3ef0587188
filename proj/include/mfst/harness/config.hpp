#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mfst/data/splits.hpp"
#include "mfst/data/synthetic.hpp"
#include "mfst/eval/protocol.hpp"
#include "mfst/model/trainer.hpp"
#include "mfst/model/transformer.hpp"

namespace mfst {

struct ExperimentConfig {
  Setting setting = Setting::kCanonical;
  /// Manifest paths; relative entries are resolved against the config file.
  std::vector<std::filesystem::path> datasets;
  std::size_t repeats = 5;
  double eval_fraction = 0.2;
  std::uint64_t seed = 1;
  TransformerConfig model;
  FitConfig training;
  bool audio_enabled = true;
  ProtocolConfig protocol;
  std::filesystem::path output_dir = "out";
  /// Repeats run concurrently on up to this many threads.
  std::size_t threads = 1;
  /// The config document exactly as read, copied into every output directory.
  std::string source_text;

  /// Throws ConfigError when a field is out of range or the dataset count
  /// does not fit the setting.
  void validate() const;
};

/// Parses the JSON key/value config document. Unknown keys are rejected.
ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

SyntheticConfig parse_synthetic_config(const std::string& text);
SyntheticConfig load_synthetic_config(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace mfst
