#include "mfst/eval/protocol.hpp"

#include <algorithm>

#include "mfst/error.hpp"
#include "mfst/eval/knapsack.hpp"
#include "mfst/model/frame_scorer.hpp"

namespace mfst {

Aggregation parse_aggregation(std::string_view text) {
  if (text == "max") return Aggregation::kMax;
  if (text == "mean") return Aggregation::kMean;
  throw ConfigError("unknown aggregation '" + std::string(text) + "', expected max|mean");
}

std::string_view to_string(Aggregation aggregation) {
  return aggregation == Aggregation::kMax ? "max" : "mean";
}

ProtocolResult f_score_protocol(std::span<const double> model_scores, const VideoRecord& record,
                                const ProtocolConfig& config) {
  if (model_scores.size() != record.frames()) {
    throw DimensionError("f_score_protocol: " + std::to_string(model_scores.size()) +
                         " scores for a " + std::to_string(record.frames()) + "-frame video " +
                         record.id());
  }
  if (record.annotator_scores.empty()) {
    throw ValidationError("f_score_protocol: video " + record.id() + " has no annotators");
  }
  const SummarySelection predicted =
      summarize(model_scores, record.segments, config.budget_fraction);

  ProtocolResult result;
  for (const ScoreVector& annotator : record.annotator_scores) {
    const SummarySelection reference = summarize(annotator, record.segments, config.budget_fraction);
    result.per_annotator.push_back(precision_recall_f(predicted.mask, reference.mask));
  }

  if (config.aggregation == Aggregation::kMax) {
    result.aggregate = *std::max_element(
        result.per_annotator.begin(), result.per_annotator.end(),
        [](const PrecisionRecall& a, const PrecisionRecall& b) { return a.f_score < b.f_score; });
  } else {
    const double k = static_cast<double>(result.per_annotator.size());
    for (const PrecisionRecall& pr : result.per_annotator) {
      result.aggregate.precision += pr.precision / k;
      result.aggregate.recall += pr.recall / k;
      result.aggregate.f_score += pr.f_score / k;
    }
  }
  return result;
}

VideoMetrics evaluate_video(std::span<const double> scores, const VideoRecord& record,
                            const ProtocolConfig& config) {
  const ProtocolResult protocol = f_score_protocol(scores, record, config);
  VideoMetrics m;
  m.video_id = record.id();
  m.frames = record.frames();
  m.f_score = protocol.aggregate.f_score;
  m.precision = protocol.aggregate.precision;
  m.recall = protocol.aggregate.recall;
  const double k = static_cast<double>(record.annotator_scores.size());
  for (const ScoreVector& annotator : record.annotator_scores) {
    m.kendall_tau += kendall_tau(annotator, scores) / k;
    m.spearman_rho += spearman_rho(annotator, scores) / k;
  }
  return m;
}

EvalReport evaluate(const FramePredictor& predict, std::span<const VideoRecord> videos,
                    const ProtocolConfig& config) {
  if (videos.empty()) throw ConfigError("evaluate: empty evaluation set");
  EvalReport report;
  report.protocol = config;
  for (const VideoRecord& record : videos) {
    const ScoreVector scores = predict(record);
    report.videos.push_back(evaluate_video(scores, record, config));
  }
  const double n = static_cast<double>(report.videos.size());
  for (const VideoMetrics& m : report.videos) {
    report.f_score += m.f_score;
    report.precision += m.precision;
    report.recall += m.recall;
    report.kendall_tau += m.kendall_tau;
    report.spearman_rho += m.spearman_rho;
  }
  report.f_score /= n;
  report.precision /= n;
  report.recall /= n;
  report.kendall_tau /= n;
  report.spearman_rho /= n;
  return report;
}

EvalReport evaluate(FrameScoringModel& model, std::span<const VideoRecord> videos,
                    const ProtocolConfig& config) {
  return evaluate([&model](const VideoRecord& r) { return forward(model, r.features); }, videos,
                  config);
}

}  // namespace mfst
