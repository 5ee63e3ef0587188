#include "mfst/data/records.hpp"

#include <algorithm>
#include <cmath>

#include "mfst/error.hpp"

namespace mfst {

ScoreVector min_max_normalize(std::span<const double> values) {
  ScoreVector out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / range;
  return out;
}

ScoreVector aggregate_ground_truth(std::span<const ScoreVector> annotators) {
  if (annotators.empty()) throw ValidationError("ground truth needs at least one annotator");
  const std::size_t n = annotators.front().size();
  std::vector<double> mean(n, 0.0);
  for (const ScoreVector& a : annotators) {
    if (a.size() != n) {
      throw ValidationError("annotator score lengths differ: " + std::to_string(n) + " vs " +
                            std::to_string(a.size()));
    }
    for (std::size_t i = 0; i < n; ++i) mean[i] += a[i];
  }
  const double count = static_cast<double>(annotators.size());
  for (double& v : mean) v /= count;
  return min_max_normalize(mean);
}

void validate_partition(std::span<const Segment> segments, std::size_t frames) {
  std::size_t cursor = 0;
  for (const Segment& s : segments) {
    if (s.start > cursor) {
      throw ValidationError("segment gap at frame " + std::to_string(cursor));
    }
    if (s.start < cursor) {
      throw ValidationError("segment overlap at frame " + std::to_string(s.start));
    }
    if (s.end <= s.start) {
      throw ValidationError("empty or reversed segment at frame " + std::to_string(s.start));
    }
    cursor = s.end;
  }
  if (cursor < frames) throw ValidationError("segment gap at frame " + std::to_string(cursor));
  if (cursor > frames) {
    throw ValidationError("segments run past the last frame: end " + std::to_string(cursor) +
                          " > " + std::to_string(frames));
  }
}

void validate_record(const VideoRecord& record) {
  const std::string& id = record.id();
  const FeatureBundle& f = record.features;
  const std::size_t n = f.visual.rows();
  auto fail = [&id](const std::string& what) -> void {
    throw ValidationError("video " + id + ": " + what);
  };
  if (n == 0) fail("no frames");
  if (f.audio.rows() != n) {
    fail("audio has " + std::to_string(f.audio.rows()) + " rows, visual has " +
         std::to_string(n));
  }
  if (f.text.rows() == 0) fail("no caption tokens");
  if (!all_finite(f.visual) || !all_finite(f.text) || !all_finite(f.audio)) {
    fail("non-finite feature value");
  }
  if (record.annotator_scores.empty()) fail("no annotator scores");
  for (std::size_t a = 0; a < record.annotator_scores.size(); ++a) {
    const ScoreVector& s = record.annotator_scores[a];
    if (s.size() != n) fail("annotator " + std::to_string(a) + " score length mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s[i])) {
        fail("annotator " + std::to_string(a) + " non-finite score at frame " + std::to_string(i));
      }
      if (s[i] < 0.0 || s[i] > 1.0) {
        fail("annotator " + std::to_string(a) + " score outside [0,1] at frame " +
             std::to_string(i));
      }
    }
  }
  if (record.gt_scores.size() != n) fail("ground-truth length mismatch");
  try {
    validate_partition(record.segments, n);
  } catch (const ValidationError& e) {
    fail(e.what());
  }
}

std::vector<Segment> uniform_segments(std::size_t frames, std::size_t length) {
  std::vector<Segment> out;
  if (length == 0) return out;
  for (std::size_t s = 0; s < frames; s += length) out.push_back({s, std::min(frames, s + length)});
  return out;
}

}  // namespace mfst
