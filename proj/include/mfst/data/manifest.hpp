#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mfst/data/records.hpp"

namespace mfst {

/// One video as declared in a manifest. Paths are relative to the manifest's
/// directory.
struct ManifestEntry {
  std::string id;
  std::size_t frames = 0;
  std::size_t tokens = 0;
  std::size_t visual_dim = 0;
  std::size_t text_dim = 0;
  std::size_t audio_dim = 0;
  std::string visual_path;
  std::string text_path;
  std::string audio_path;
  std::vector<std::string> annotator_paths;
  std::vector<Segment> segments;
};

struct DatasetManifest {
  std::string name;
  std::vector<ManifestEntry> videos;
};

inline constexpr const char* kManifestFormat = "mfst-dataset/1";

DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

struct Dataset {
  std::string name;
  std::vector<VideoRecord> videos;
};

/// Loads and validates every video. Failures are reported with the video id:
/// IoError for missing payloads, FormatError for size or schema mismatches,
/// NumericError for non-finite values, ValidationError for broken segment
/// partitions or out-of-range annotator scores.
Dataset load_dataset(const std::filesystem::path& manifest_path);

/// Writes payloads under `directory/videos/<id>/` plus `directory/manifest.json`.
/// Values are narrowed to float32. Returns the manifest path.
std::filesystem::path save_dataset(const std::filesystem::path& directory, const Dataset& dataset);

}  // namespace mfst
