#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mfst/data/records.hpp"
#include "mfst/eval/metrics.hpp"

namespace mfst {

class FrameScoringModel;

/// How per-annotator F-scores collapse into one number per video: max suits
/// datasets with several reference summaries, mean suits per-frame score
/// annotations.
enum class Aggregation { kMax, kMean };

Aggregation parse_aggregation(std::string_view text);
std::string_view to_string(Aggregation aggregation);

struct ProtocolConfig {
  double budget_fraction = 0.15;
  Aggregation aggregation = Aggregation::kMean;
};

struct ProtocolResult {
  /// Precision and recall come from the best annotator under max aggregation
  /// and are averaged under mean aggregation.
  PrecisionRecall aggregate;
  std::vector<PrecisionRecall> per_annotator;
};

/// Builds the model summary and one summary per annotator with the same
/// segment-knapsack procedure, then scores the model against each.
ProtocolResult f_score_protocol(std::span<const double> model_scores, const VideoRecord& record,
                                const ProtocolConfig& config);

struct VideoMetrics {
  std::string video_id;
  std::size_t frames = 0;
  double f_score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  /// Rank correlations against each annotator, averaged.
  double kendall_tau = 0.0;
  double spearman_rho = 0.0;
};

struct EvalReport {
  ProtocolConfig protocol;
  std::vector<VideoMetrics> videos;
  double f_score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double kendall_tau = 0.0;
  double spearman_rho = 0.0;
};

using FramePredictor = std::function<ScoreVector(const VideoRecord&)>;

VideoMetrics evaluate_video(std::span<const double> scores, const VideoRecord& record,
                            const ProtocolConfig& config);

/// Per-video metrics and their means. Throws ConfigError on an empty set.
EvalReport evaluate(const FramePredictor& predict, std::span<const VideoRecord> videos,
                    const ProtocolConfig& config);
EvalReport evaluate(FrameScoringModel& model, std::span<const VideoRecord> videos,
                    const ProtocolConfig& config);

}  // namespace mfst
