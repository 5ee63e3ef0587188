#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mfst/data/manifest.hpp"
#include "mfst/eval/protocol.hpp"
#include "mfst/harness/config.hpp"
#include "mfst/model/trainer.hpp"

namespace mfst {

/// A dataset plus, for synthetic data, the hidden planted scores.
struct LoadedDataset {
  Dataset data;
  std::map<std::string, ScoreVector> planted;
};

/// Loads a manifest and, when `planted.json` sits next to it, the planted scores.
LoadedDataset load_experiment_dataset(const std::filesystem::path& manifest);

struct RunReport {
  std::size_t index = 0;  // 1-based
  std::uint64_t seed = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> eval_ids;
  TrainingLog log;
  EvalReport eval;
  /// Mean over eval videos of tau / rho between predictions and planted
  /// scores; present only when every eval video has planted scores.
  std::optional<double> planted_tau;
  std::optional<double> planted_rho;
};

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single run
};

MetricSummary summarize_metric(const std::vector<double>& values);

struct AggregateReport {
  std::string label;
  std::vector<RunReport> runs;
  MetricSummary f_score, precision, recall, kendall_tau, spearman_rho;
  std::optional<MetricSummary> planted_tau, planted_rho;
};

/// Runs config.repeats independent repeats; repeat r (1-based) uses seed
/// config.seed + r for its split, model initialization and shuffling. Errors
/// are rethrown with the run index.
AggregateReport run_experiment(const ExperimentConfig& config,
                               const std::vector<LoadedDataset>& datasets);
AggregateReport run_experiment(const ExperimentConfig& config);

struct AblationReport {
  AggregateReport without_audio;
  AggregateReport with_audio;
  /// with minus without, per repeat and on the means.
  std::vector<double> f_score_delta_per_run;
  double f_score_delta = 0.0;
  double kendall_tau_delta = 0.0;
  double spearman_rho_delta = 0.0;
};

/// The same experiment twice with identical seeds: audio off, then audio on.
AblationReport run_ablation(const ExperimentConfig& config,
                            const std::vector<LoadedDataset>& datasets);
AblationReport run_ablation(const ExperimentConfig& config);

void write_aggregate_text(std::ostream& out, const ExperimentConfig& config,
                          const AggregateReport& report);
void write_ablation_text(std::ostream& out, const ExperimentConfig& config,
                         const AblationReport& report);

/// Writes config.json, per-run reports, the aggregate report and
/// outputs.txt (the list of produced files) under `directory`. Returns the
/// produced files relative to `directory`.
std::vector<std::string> write_experiment_outputs(const std::filesystem::path& directory,
                                                  const ExperimentConfig& config,
                                                  const AggregateReport& report);
std::vector<std::string> write_ablation_outputs(const std::filesystem::path& directory,
                                                const ExperimentConfig& config,
                                                const AblationReport& report);

/// Writes `outputs.txt` listing `files` (plus itself).
void write_output_manifest(const std::filesystem::path& directory, std::vector<std::string> files);

}  // namespace mfst
