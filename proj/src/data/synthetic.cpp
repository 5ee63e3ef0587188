#include "mfst/data/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "mfst/data/binary_io.hpp"
#include "mfst/error.hpp"
#include "mfst/numerics/parameter.hpp"

namespace mfst {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_config(const SyntheticConfig& c) {
  auto bad = [](const std::string& what) { throw ConfigError("synthetic config: " + what); };
  if (c.num_videos == 0) bad("num_videos must be >= 1");
  if (c.frames_min == 0 || c.frames_min > c.frames_max) bad("frame range is empty");
  if (c.tokens_min == 0 || c.tokens_min > c.tokens_max) bad("token range is empty");
  if (c.visual_dim == 0 || c.text_dim == 0 || c.audio_dim == 0) bad("feature dims must be >= 1");
  if (c.visual_dim % 2 || c.text_dim % 2 || c.audio_dim % 2) bad("feature dims must be even");
  if (c.annotators == 0) bad("annotators must be >= 1");
  if (c.segment_min == 0 || c.segment_min > c.segment_max) bad("segment length range is empty");
  if (c.segment_max + 1 < 2 * c.segment_min) {
    bad("segment_max must be at least 2*segment_min-1 to partition every length");
  }
  if (c.annotator_noise < 0.0 || c.score_noise < 0.0) bad("noise levels must be >= 0");
}

Tensor2 rounded_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  Tensor2 t = gaussian_tensor(rows, cols, 1.0, rng);
  for (double& v : t.data()) v = round_to_f32(v);
  return t;
}

std::vector<Segment> draw_segments(std::size_t frames, std::size_t lo, std::size_t hi,
                                   std::mt19937_64& rng) {
  std::vector<Segment> out;
  std::size_t start = 0;
  while (frames - start > hi) {
    const std::size_t remaining = frames - start;
    std::uniform_int_distribution<std::size_t> len(lo, std::min(hi, remaining - lo));
    const std::size_t l = len(rng);
    out.push_back({start, start + l});
    start += l;
  }
  out.push_back({start, frames});
  return out;
}

json tensor_json(const Tensor2& t) {
  json rows = json::array();
  for (std::size_t r = 0; r < t.rows(); ++r) {
    rows.push_back(std::vector<double>(t.row(r).begin(), t.row(r).end()));
  }
  return rows;
}

}  // namespace

std::vector<double> PlantedScorer::logits(const FeatureBundle& bundle) const {
  const Tensor2 queries = matmul(bundle.visual, text_query);
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(bundle.text.cols()));
  const Tensor2 weights = softmax_rows(scale(matmul_nt(queries, bundle.text), inv_sqrt));
  const Tensor2 pooled = matmul(weights, bundle.text);
  const Tensor2 visual_term = matmul_nt(bundle.visual, visual_weights);
  const Tensor2 text_term = matmul_nt(pooled, text_weights);
  const Tensor2 audio_term = matmul_nt(bundle.audio, audio_weights);
  std::vector<double> out(bundle.frames());
  for (std::size_t f = 0; f < out.size(); ++f) {
    out[f] = visual_term(f, 0) + text_term(f, 0) + audio_term(f, 0);
  }
  return out;
}

SyntheticDataset synthesize(const SyntheticConfig& config) {
  check_config(config);
  std::mt19937_64 rng(config.seed);

  SyntheticDataset out;
  PlantedScorer& s = out.scorer;
  // Each linear term has roughly unit variance over standard-normal features.
  s.visual_weights = gaussian_tensor(1, config.visual_dim,
                                     1.0 / std::sqrt(static_cast<double>(config.visual_dim)), rng);
  s.text_weights = gaussian_tensor(1, config.text_dim,
                                   1.0 / std::sqrt(static_cast<double>(config.text_dim)), rng);
  s.audio_weights = gaussian_tensor(1, config.audio_dim,
                                    1.0 / std::sqrt(static_cast<double>(config.audio_dim)), rng);
  if (!config.audio_dependent) s.audio_weights.fill(0.0);
  s.text_query = gaussian_tensor(config.visual_dim, config.text_dim,
                                 1.0 / std::sqrt(static_cast<double>(config.visual_dim)), rng);
  s.noise_std = config.score_noise;

  std::uniform_int_distribution<std::size_t> frames_dist(config.frames_min, config.frames_max);
  std::uniform_int_distribution<std::size_t> tokens_dist(config.tokens_min, config.tokens_max);
  std::normal_distribution<double> logit_noise(0.0, 1.0);
  std::uniform_real_distribution<double> annot_noise(-config.annotator_noise, config.annotator_noise);

  out.dataset.name = config.name;
  for (std::size_t v = 0; v < config.num_videos; ++v) {
    char id[64];
    std::snprintf(id, sizeof id, "%s_v%03zu", config.name.c_str(), v);
    const std::size_t n = frames_dist(rng);
    const std::size_t m = tokens_dist(rng);

    VideoRecord r;
    r.features.video_id = id;
    r.features.visual = rounded_gaussian(n, config.visual_dim, rng);
    r.features.text = rounded_gaussian(m, config.text_dim, rng);
    r.features.audio = rounded_gaussian(n, config.audio_dim, rng);

    std::vector<double> logit = s.logits(r.features);
    for (double& l : logit) l += s.noise_std * logit_noise(rng);
    for (double& l : logit) l = 1.0 / (1.0 + std::exp(-l));
    ScoreVector planted = min_max_normalize(logit);
    for (double& p : planted) p = round_to_f32(p);

    for (std::size_t a = 0; a < config.annotators; ++a) {
      ScoreVector scores(n);
      for (std::size_t f = 0; f < n; ++f) {
        scores[f] = round_to_f32(std::clamp(planted[f] + annot_noise(rng), 0.0, 1.0));
      }
      r.annotator_scores.push_back(std::move(scores));
    }
    r.gt_scores = aggregate_ground_truth(r.annotator_scores);
    r.segments = draw_segments(n, config.segment_min, config.segment_max, rng);
    validate_record(r);

    out.planted_scores.emplace(r.id(), std::move(planted));
    out.dataset.videos.push_back(std::move(r));
  }
  return out;
}

fs::path write_synthetic(const fs::path& directory, const SyntheticDataset& data) {
  const fs::path manifest = save_dataset(directory, data.dataset);
  json videos = json::object();
  for (const auto& [id, scores] : data.planted_scores) {
    const std::string rel = "videos/" + id + "/planted.f32";
    write_f32_file(directory / rel, scores);
    videos[id] = {{"frames", scores.size()}, {"scores", rel}};
  }
  json root = {{"format", "mfst-planted/1"},
               {"dataset", data.dataset.name},
               {"visual_weights", tensor_json(data.scorer.visual_weights)},
               {"text_weights", tensor_json(data.scorer.text_weights)},
               {"audio_weights", tensor_json(data.scorer.audio_weights)},
               {"text_query", tensor_json(data.scorer.text_query)},
               {"noise_std", data.scorer.noise_std},
               {"videos", videos}};
  std::ofstream out(directory / "planted.json", std::ios::trunc);
  if (!out) throw IoError("cannot write " + (directory / "planted.json").string());
  out << root.dump(1) << '\n';
  return manifest;
}

fs::path generate_synthetic(const SyntheticConfig& config, const fs::path& directory) {
  return write_synthetic(directory, synthesize(config));
}

std::map<std::string, ScoreVector> load_planted_scores(const fs::path& directory) {
  const fs::path path = directory / "planted.json";
  std::ifstream in(path);
  if (!in) throw IoError("missing planted scorer description: " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  std::map<std::string, ScoreVector> out;
  for (const auto& [id, entry] : root.at("videos").items()) {
    out.emplace(id, read_f32_file(directory / entry.at("scores").get<std::string>(),
                                  entry.at("frames").get<std::size_t>()));
  }
  return out;
}

}  // namespace mfst
