#include "mfst/data/manifest.hpp"

#include <array>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "mfst/data/binary_io.hpp"
#include "mfst/error.hpp"

namespace mfst {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
T field(const json& node, const char* key, const std::string& where) {
  if (!node.contains(key)) throw FormatError(where + ": missing field '" + key + "'");
  try {
    return node.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(where + ": bad field '" + key + "': " + e.what());
  }
}

Tensor2 load_matrix(const fs::path& base, const std::string& rel, std::size_t rows,
                    std::size_t cols, const std::string& id, const char* what) {
  std::vector<double> values;
  try {
    values = read_f32_file(base / rel, rows * cols);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw IoError("video " + id + " " + what + ": " + e.what());
    throw FormatError("video " + id + " " + what + ": " + e.what());
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw NumericError("video " + id + " " + what + ": non-finite value at row " +
                         std::to_string(i / cols) + ", column " + std::to_string(i % cols));
    }
  }
  return Tensor2(rows, cols, std::move(values));
}

}  // namespace

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("missing manifest: " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
  const std::string where = "manifest " + path.string();
  if (field<std::string>(root, "format", where) != kManifestFormat) {
    throw FormatError(where + ": unsupported format, expected " + kManifestFormat);
  }
  DatasetManifest manifest;
  manifest.name = field<std::string>(root, "dataset", where);
  for (const json& v : field<json>(root, "videos", where)) {
    ManifestEntry e;
    e.id = field<std::string>(v, "id", where);
    const std::string at = where + " video " + e.id;
    e.frames = field<std::size_t>(v, "frames", at);
    e.tokens = field<std::size_t>(v, "tokens", at);
    e.visual_dim = field<std::size_t>(v, "visual_dim", at);
    e.text_dim = field<std::size_t>(v, "text_dim", at);
    e.audio_dim = field<std::size_t>(v, "audio_dim", at);
    e.visual_path = field<std::string>(v, "visual", at);
    e.text_path = field<std::string>(v, "text", at);
    e.audio_path = field<std::string>(v, "audio", at);
    e.annotator_paths = field<std::vector<std::string>>(v, "annotators", at);
    for (const auto& pair : field<std::vector<std::array<std::size_t, 2>>>(v, "segments", at)) {
      e.segments.push_back({pair[0], pair[1]});
    }
    manifest.videos.push_back(std::move(e));
  }
  return manifest;
}

void write_manifest(const fs::path& path, const DatasetManifest& manifest) {
  json root;
  root["format"] = kManifestFormat;
  root["dataset"] = manifest.name;
  json videos = json::array();
  for (const ManifestEntry& e : manifest.videos) {
    json segs = json::array();
    for (const Segment& s : e.segments) segs.push_back({s.start, s.end});
    videos.push_back({{"id", e.id},
                      {"frames", e.frames},
                      {"tokens", e.tokens},
                      {"visual_dim", e.visual_dim},
                      {"text_dim", e.text_dim},
                      {"audio_dim", e.audio_dim},
                      {"visual", e.visual_path},
                      {"text", e.text_path},
                      {"audio", e.audio_path},
                      {"annotators", e.annotator_paths},
                      {"segments", segs}});
  }
  root["videos"] = videos;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << root.dump(1) << '\n';
}

Dataset load_dataset(const fs::path& manifest_path) {
  const DatasetManifest manifest = read_manifest(manifest_path);
  const fs::path base = manifest_path.parent_path();
  Dataset dataset;
  dataset.name = manifest.name;
  for (const ManifestEntry& e : manifest.videos) {
    if (e.frames == 0) throw ValidationError("video " + e.id + ": no frames");
    if (e.tokens == 0) throw ValidationError("video " + e.id + ": no caption tokens");
    if (e.annotator_paths.empty()) throw ValidationError("video " + e.id + ": no annotators");
    VideoRecord r;
    r.features.video_id = e.id;
    r.features.visual = load_matrix(base, e.visual_path, e.frames, e.visual_dim, e.id, "visual");
    r.features.text = load_matrix(base, e.text_path, e.tokens, e.text_dim, e.id, "text");
    r.features.audio = load_matrix(base, e.audio_path, e.frames, e.audio_dim, e.id, "audio");
    for (std::size_t a = 0; a < e.annotator_paths.size(); ++a) {
      const Tensor2 scores = load_matrix(base, e.annotator_paths[a], e.frames, 1, e.id,
                                         ("annotator " + std::to_string(a)).c_str());
      r.annotator_scores.emplace_back(scores.data().begin(), scores.data().end());
    }
    r.segments = e.segments;
    r.gt_scores = aggregate_ground_truth(r.annotator_scores);
    validate_record(r);
    dataset.videos.push_back(std::move(r));
  }
  return dataset;
}

fs::path save_dataset(const fs::path& directory, const Dataset& dataset) {
  DatasetManifest manifest;
  manifest.name = dataset.name;
  for (const VideoRecord& r : dataset.videos) {
    const FeatureBundle& f = r.features;
    const std::string dir = "videos/" + r.id() + "/";
    ManifestEntry e;
    e.id = r.id();
    e.frames = f.frames();
    e.tokens = f.tokens();
    e.visual_dim = f.visual.cols();
    e.text_dim = f.text.cols();
    e.audio_dim = f.audio.cols();
    e.visual_path = dir + "visual.f32";
    e.text_path = dir + "text.f32";
    e.audio_path = dir + "audio.f32";
    write_f32_file(directory / e.visual_path, f.visual.data());
    write_f32_file(directory / e.text_path, f.text.data());
    write_f32_file(directory / e.audio_path, f.audio.data());
    for (std::size_t a = 0; a < r.annotator_scores.size(); ++a) {
      e.annotator_paths.push_back(dir + "annotator_" + std::to_string(a) + ".f32");
      write_f32_file(directory / e.annotator_paths.back(), r.annotator_scores[a]);
    }
    e.segments = r.segments;
    manifest.videos.push_back(std::move(e));
  }
  const fs::path manifest_path = directory / "manifest.json";
  write_manifest(manifest_path, manifest);
  return manifest_path;
}

}  // namespace mfst
