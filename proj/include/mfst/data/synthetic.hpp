#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "mfst/data/manifest.hpp"

namespace mfst {

struct SyntheticConfig {
  std::string name = "synthetic";
  std::size_t num_videos = 40;
  std::size_t frames_min = 48;
  std::size_t frames_max = 96;
  std::size_t tokens_min = 4;
  std::size_t tokens_max = 12;
  std::size_t visual_dim = 16;
  std::size_t text_dim = 16;
  std::size_t audio_dim = 8;
  std::uint64_t seed = 1;
  /// When false the planted scorer ignores the audio stream entirely.
  bool audio_dependent = true;
  std::size_t annotators = 3;
  /// Annotators see the planted score plus uniform noise in [-a, a].
  double annotator_noise = 0.1;
  /// Std of Gaussian noise added to the planted logit.
  double score_noise = 0.1;
  std::size_t segment_min = 5;
  std::size_t segment_max = 15;
};

/// Hidden scoring function used to fabricate ground truth:
///
///   pooled_f = sum_j softmax_j((v_f Q) . t_j / sqrt(d_t)) t_j
///   score_f  = sigmoid(a . v_f + b . pooled_f + c . audio_f + noise)
///
/// followed by per-video min-max normalization.
struct PlantedScorer {
  Tensor2 visual_weights;  // 1 x d_v (a)
  Tensor2 text_weights;    // 1 x d_t (b)
  Tensor2 audio_weights;   // 1 x d_a (c), zero when audio is disabled
  Tensor2 text_query;      // d_v x d_t (Q)
  double noise_std = 0.0;

  /// Noise-free logits for one bundle; one entry per frame.
  std::vector<double> logits(const FeatureBundle& bundle) const;
};

struct SyntheticDataset {
  Dataset dataset;
  PlantedScorer scorer;
  /// Normalized planted scores per video id, rounded through float32.
  std::map<std::string, ScoreVector> planted_scores;
};

SyntheticDataset synthesize(const SyntheticConfig& config);

/// Writes the dataset plus `planted.json` and per-video planted score payloads.
/// Returns the manifest path.
std::filesystem::path write_synthetic(const std::filesystem::path& directory,
                                      const SyntheticDataset& data);

std::filesystem::path generate_synthetic(const SyntheticConfig& config,
                                         const std::filesystem::path& directory);

/// Reads planted scores written by write_synthetic from `directory/planted.json`.
std::map<std::string, ScoreVector> load_planted_scores(const std::filesystem::path& directory);

}  // namespace mfst
