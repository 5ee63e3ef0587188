#include "mfst/harness/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "mfst/error.hpp"
#include "mfst/eval/metrics.hpp"
#include "mfst/eval/report.hpp"
#include "mfst/model/frame_scorer.hpp"

namespace mfst {

namespace fs = std::filesystem;

LoadedDataset load_experiment_dataset(const fs::path& manifest) {
  LoadedDataset out;
  out.data = load_dataset(manifest);
  const fs::path dir = manifest.parent_path();
  if (fs::exists(dir / "planted.json")) out.planted = load_planted_scores(dir);
  return out;
}

MetricSummary summarize_metric(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

namespace {

RunReport run_once(const ExperimentConfig& config, const std::vector<LoadedDataset>& datasets,
                   std::size_t index) {
  RunReport run;
  run.index = index;
  run.seed = config.seed + index;

  std::vector<std::vector<VideoRecord>> pools;
  for (const LoadedDataset& d : datasets) pools.push_back(d.data.videos);
  const Split split = make_splits(pools, config.setting, run.seed, config.eval_fraction);
  for (const VideoRecord& r : split.train) run.train_ids.push_back(r.id());
  for (const VideoRecord& r : split.eval) run.eval_ids.push_back(r.id());

  const FeatureBundle& probe = split.train.front().features;
  const ModalityDims dims{probe.visual.cols(), probe.text.cols(), probe.audio.cols()};
  FrameScoringModel model(dims, config.model, config.audio_enabled, run.seed);
  FitConfig fit_config = config.training;
  fit_config.seed = run.seed;
  fit_config.audio_enabled = config.audio_enabled;
  run.log = fit(model, split.train, fit_config);

  std::unordered_map<std::string, ScoreVector> predictions;
  for (const VideoRecord& r : split.eval) predictions.emplace(r.id(), forward(model, r.features));
  run.eval = evaluate([&](const VideoRecord& r) { return predictions.at(r.id()); }, split.eval,
                      config.protocol);

  double tau = 0.0, rho = 0.0;
  std::size_t found = 0;
  for (const VideoRecord& r : split.eval) {
    for (const LoadedDataset& d : datasets) {
      auto it = d.planted.find(r.id());
      if (it == d.planted.end()) continue;
      tau += kendall_tau(it->second, predictions.at(r.id()));
      rho += spearman_rho(it->second, predictions.at(r.id()));
      ++found;
      break;
    }
  }
  if (found == split.eval.size()) {
    run.planted_tau = tau / static_cast<double>(found);
    run.planted_rho = rho / static_cast<double>(found);
  }
  return run;
}

RunReport run_guarded(const ExperimentConfig& config, const std::vector<LoadedDataset>& datasets,
                      std::size_t index) {
  try {
    return run_once(config, datasets, index);
  } catch (const Error& e) {
    throw Error(e.kind(), "run " + std::to_string(index) + ": " + e.what());
  }
}

std::string describe(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "setting=" << to_string(c.setting) << " repeats=" << c.repeats
      << " eval_fraction=" << format_fixed(c.eval_fraction, 4) << " seed=" << c.seed
      << " audio=" << (c.audio_enabled ? "on" : "off") << '\n'
      << "model: d=" << c.model.model_dim << " heads=" << c.model.heads
      << " encoder_layers=" << c.model.encoder_layers
      << " decoder_layers=" << c.model.decoder_layers << " ff=" << c.model.ff_dim
      << " positions=" << (c.model.positional_encoding ? "sinusoidal" : "none") << '\n'
      << "training: epochs=" << c.training.epochs
      << " lr=" << format_fixed(c.training.learning_rate, 8)
      << " batch=" << c.training.batch_size << '\n'
      << "protocol: budget_fraction=" << format_fixed(c.protocol.budget_fraction, 4)
      << " aggregation=" << to_string(c.protocol.aggregation) << '\n';
  return out.str();
}

std::string summary_cell(const MetricSummary& s) {
  return format_fixed(s.mean) + " +- " + format_fixed(s.stddev);
}

std::vector<double> collect(const std::vector<RunReport>& runs, double EvalReport::*field) {
  std::vector<double> out;
  for (const RunReport& r : runs) out.push_back(r.eval.*field);
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::string> write_runs(const fs::path& directory, const std::string& prefix,
                                    const AggregateReport& report) {
  std::vector<std::string> files;
  for (const RunReport& run : report.runs) {
    const std::string dir = prefix + "run_" + std::to_string(run.index) + "/";
    std::ostringstream text, csv, log;
    text << "run " << run.index << " seed=" << run.seed << " train=" << run.train_ids.size()
         << " eval=" << run.eval_ids.size() << '\n';
    write_text_report(text, run.eval);
    write_csv_report(csv, run.eval);
    log << "epoch,loss\n";
    for (std::size_t e = 0; e < run.log.epoch_loss.size(); ++e) {
      char line[64];
      std::snprintf(line, sizeof line, "%zu,%.17g\n", e + 1, run.log.epoch_loss[e]);
      log << line;
    }
    write_file(directory / (dir + "report.txt"), text.str());
    write_file(directory / (dir + "report.csv"), csv.str());
    write_file(directory / (dir + "training_log.csv"), log.str());
    for (const char* f : {"report.txt", "report.csv", "training_log.csv"}) files.push_back(dir + f);
  }
  return files;
}

}  // namespace

AggregateReport run_experiment(const ExperimentConfig& config,
                               const std::vector<LoadedDataset>& datasets) {
  config.validate();
  if (datasets.size() != config.datasets.size()) {
    throw ConfigError("run_experiment: " + std::to_string(datasets.size()) +
                      " datasets loaded, config lists " + std::to_string(config.datasets.size()));
  }
  AggregateReport report;
  report.label = std::string(to_string(config.setting)) + (config.audio_enabled ? "+audio" : "");
  report.runs.resize(config.repeats);
  for (std::size_t start = 0; start < config.repeats; start += config.threads) {
    const std::size_t stop = std::min(config.repeats, start + config.threads);
    if (stop - start == 1) {
      report.runs[start] = run_guarded(config, datasets, start + 1);
      continue;
    }
    std::vector<std::future<RunReport>> pending;
    for (std::size_t i = start; i < stop; ++i) {
      pending.push_back(std::async(std::launch::async, run_guarded, std::cref(config),
                                   std::cref(datasets), i + 1));
    }
    for (std::size_t i = start; i < stop; ++i) report.runs[i] = pending[i - start].get();
  }

  report.f_score = summarize_metric(collect(report.runs, &EvalReport::f_score));
  report.precision = summarize_metric(collect(report.runs, &EvalReport::precision));
  report.recall = summarize_metric(collect(report.runs, &EvalReport::recall));
  report.kendall_tau = summarize_metric(collect(report.runs, &EvalReport::kendall_tau));
  report.spearman_rho = summarize_metric(collect(report.runs, &EvalReport::spearman_rho));
  std::vector<double> ptau, prho;
  for (const RunReport& r : report.runs) {
    if (r.planted_tau) ptau.push_back(*r.planted_tau);
    if (r.planted_rho) prho.push_back(*r.planted_rho);
  }
  if (ptau.size() == report.runs.size()) {
    report.planted_tau = summarize_metric(ptau);
    report.planted_rho = summarize_metric(prho);
  }
  return report;
}

AggregateReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<LoadedDataset> datasets;
  for (const fs::path& p : config.datasets) datasets.push_back(load_experiment_dataset(p));
  return run_experiment(config, datasets);
}

AblationReport run_ablation(const ExperimentConfig& config,
                            const std::vector<LoadedDataset>& datasets) {
  ExperimentConfig off = config;
  off.audio_enabled = false;
  off.training.audio_enabled = false;
  ExperimentConfig on = config;
  on.audio_enabled = true;
  on.training.audio_enabled = true;

  AblationReport report;
  report.without_audio = run_experiment(off, datasets);
  report.with_audio = run_experiment(on, datasets);
  for (std::size_t i = 0; i < report.with_audio.runs.size(); ++i) {
    report.f_score_delta_per_run.push_back(report.with_audio.runs[i].eval.f_score -
                                           report.without_audio.runs[i].eval.f_score);
  }
  report.f_score_delta = report.with_audio.f_score.mean - report.without_audio.f_score.mean;
  report.kendall_tau_delta =
      report.with_audio.kendall_tau.mean - report.without_audio.kendall_tau.mean;
  report.spearman_rho_delta =
      report.with_audio.spearman_rho.mean - report.without_audio.spearman_rho.mean;
  return report;
}

AblationReport run_ablation(const ExperimentConfig& config) {
  config.validate();
  std::vector<LoadedDataset> datasets;
  for (const fs::path& p : config.datasets) datasets.push_back(load_experiment_dataset(p));
  return run_ablation(config, datasets);
}

void write_aggregate_text(std::ostream& out, const ExperimentConfig& config,
                          const AggregateReport& report) {
  out << "experiment " << report.label << '\n' << describe(config);
  char line[256];
  std::snprintf(line, sizeof line, "%-5s %6s %9s %9s %9s %9s %9s %11s\n", "run", "seed", "f_score",
                "precision", "recall", "tau", "rho", "final_loss");
  out << line;
  for (const RunReport& r : report.runs) {
    std::snprintf(line, sizeof line, "%-5zu %6llu %9s %9s %9s %9s %9s %11s\n", r.index,
                  static_cast<unsigned long long>(r.seed), format_fixed(r.eval.f_score).c_str(),
                  format_fixed(r.eval.precision).c_str(), format_fixed(r.eval.recall).c_str(),
                  format_fixed(r.eval.kendall_tau).c_str(),
                  format_fixed(r.eval.spearman_rho).c_str(),
                  format_fixed(r.log.epoch_loss.back(), 8).c_str());
    out << line;
  }
  out << "f_score      " << summary_cell(report.f_score) << '\n'
      << "precision    " << summary_cell(report.precision) << '\n'
      << "recall       " << summary_cell(report.recall) << '\n'
      << "kendall_tau  " << summary_cell(report.kendall_tau) << '\n'
      << "spearman_rho " << summary_cell(report.spearman_rho) << '\n';
  if (report.planted_tau) {
    out << "planted_tau  " << summary_cell(*report.planted_tau) << '\n'
        << "planted_rho  " << summary_cell(*report.planted_rho) << '\n';
  }
}

void write_ablation_text(std::ostream& out, const ExperimentConfig& config,
                         const AblationReport& report) {
  ExperimentConfig off = config, on = config;
  off.audio_enabled = false;
  on.audio_enabled = true;
  out << "== without audio\n";
  write_aggregate_text(out, off, report.without_audio);
  out << "== with audio\n";
  write_aggregate_text(out, on, report.with_audio);
  out << "== delta (with - without)\n";
  for (std::size_t i = 0; i < report.f_score_delta_per_run.size(); ++i) {
    out << "run " << i + 1 << " f_score " << format_fixed(report.f_score_delta_per_run[i]) << '\n';
  }
  out << "f_score      " << format_fixed(report.f_score_delta) << '\n'
      << "kendall_tau  " << format_fixed(report.kendall_tau_delta) << '\n'
      << "spearman_rho " << format_fixed(report.spearman_rho_delta) << '\n';
}

void write_output_manifest(const fs::path& directory, std::vector<std::string> files) {
  files.push_back("outputs.txt");
  std::ostringstream out;
  for (const std::string& f : files) out << f << '\n';
  write_file(directory / "outputs.txt", out.str());
}

std::vector<std::string> write_experiment_outputs(const fs::path& directory,
                                                  const ExperimentConfig& config,
                                                  const AggregateReport& report) {
  std::vector<std::string> files;
  write_file(directory / "config.json", config.source_text);
  files.push_back("config.json");
  const std::vector<std::string> runs = write_runs(directory, "", report);
  files.insert(files.end(), runs.begin(), runs.end());
  std::ostringstream text;
  write_aggregate_text(text, config, report);
  write_file(directory / "aggregate.txt", text.str());
  files.push_back("aggregate.txt");
  write_output_manifest(directory, files);
  return files;
}

std::vector<std::string> write_ablation_outputs(const fs::path& directory,
                                                const ExperimentConfig& config,
                                                const AblationReport& report) {
  std::vector<std::string> files;
  write_file(directory / "config.json", config.source_text);
  files.push_back("config.json");
  for (const auto& [prefix, agg] : {std::pair{"without_audio/", &report.without_audio},
                                    std::pair{"with_audio/", &report.with_audio}}) {
    const std::vector<std::string> runs = write_runs(directory, prefix, *agg);
    files.insert(files.end(), runs.begin(), runs.end());
  }
  std::ostringstream text;
  write_ablation_text(text, config, report);
  write_file(directory / "ablation.txt", text.str());
  files.push_back("ablation.txt");
  write_output_manifest(directory, files);
  return files;
}

}  // namespace mfst
