#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mfst/numerics/tensor.hpp"

namespace mfst {

/// Per-frame importance scores, one value in [0,1] per frame.
using ScoreVector = std::vector<double>;

/// Half-open frame interval [start, end).
struct Segment {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Aligned modality features of one video. Visual and audio have one row per
/// frame; text has one row per caption token.
struct FeatureBundle {
  std::string video_id;
  Tensor2 visual;
  Tensor2 text;
  Tensor2 audio;

  std::size_t frames() const { return visual.rows(); }
  std::size_t tokens() const { return text.rows(); }
};

struct VideoRecord {
  FeatureBundle features;
  ScoreVector gt_scores;
  std::vector<ScoreVector> annotator_scores;
  std::vector<Segment> segments;

  const std::string& id() const { return features.video_id; }
  std::size_t frames() const { return features.frames(); }
};

/// Per-frame mean over annotators, min-max normalized to [0,1]; a constant
/// mean maps to all zeros.
ScoreVector aggregate_ground_truth(std::span<const ScoreVector> annotators);

/// Min-max normalization to [0,1]; constant input maps to all zeros.
ScoreVector min_max_normalize(std::span<const double> values);

/// Throws ValidationError unless `segments` are contiguous, non-empty and
/// cover [0, frames) exactly. The message names the first offending frame.
void validate_partition(std::span<const Segment> segments, std::size_t frames);

/// Checks every VideoRecord invariant except the ground-truth recomputation.
/// Errors name the video id.
void validate_record(const VideoRecord& record);

/// Fixed-length segmentation helper for tests and tools; the last segment may
/// be shorter.
std::vector<Segment> uniform_segments(std::size_t frames, std::size_t length);

}  // namespace mfst
