// Command-line driver: synth, train, eval, experiment, ablate, curves.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mfst/data/manifest.hpp"
#include "mfst/data/synthetic.hpp"
#include "mfst/error.hpp"
#include "mfst/eval/report.hpp"
#include "mfst/harness/config.hpp"
#include "mfst/harness/curves.hpp"
#include "mfst/harness/experiment.hpp"
#include "mfst/model/checkpoint.hpp"

namespace fs = std::filesystem;

namespace {

int exit_code(mfst::ErrorKind kind) {
  switch (kind) {
    case mfst::ErrorKind::kConfiguration: return 2;
    case mfst::ErrorKind::kIo: return 3;
    case mfst::ErrorKind::kFormat: return 4;
    case mfst::ErrorKind::kValidation: return 5;
    case mfst::ErrorKind::kDimension: return 6;
    case mfst::ErrorKind::kNumeric: return 7;
  }
  return 1;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw mfst::IoError("cannot write " + path.string());
  out << content;
}

mfst::ExperimentConfig experiment_config(const std::string& path, const std::string& setting,
                                         const std::string& out) {
  mfst::ExperimentConfig config = mfst::load_experiment_config(path);
  if (!setting.empty()) config.setting = mfst::parse_setting(setting);
  if (!out.empty()) config.output_dir = out;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimodal frame-scoring transformer for video summarization"};
  app.require_subcommand(1);

  std::string config_path, setting, out_dir, checkpoint, manifest, aggregation = "mean";
  double budget = 0.15;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with planted scores");
  synth->add_option("--config", config_path, "Synthetic dataset config (JSON)")->required();
  synth->add_option("--out", out_dir, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Train on the first repeat's training split");
  train->add_option("--config", config_path, "Experiment config (JSON)")->required();
  train->add_option("--setting", setting, "canonical|augment|transfer");
  train->add_option("--out", out_dir, "Output directory");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
  eval->add_option("--checkpoint", checkpoint)->required();
  eval->add_option("--manifest", manifest)->required();
  eval->add_option("--out", out_dir)->required();
  eval->add_option("--aggregation", aggregation, "max|mean");
  eval->add_option("--budget", budget, "Summary length as a fraction of frames");

  auto* experiment = app.add_subcommand("experiment", "Repeated train/evaluate runs");
  experiment->add_option("--config", config_path)->required();
  experiment->add_option("--setting", setting, "canonical|augment|transfer");
  experiment->add_option("--out", out_dir);

  auto* ablate = app.add_subcommand("ablate", "Run an experiment without and with audio");
  ablate->add_option("--config", config_path)->required();
  ablate->add_option("--setting", setting, "canonical|augment|transfer");
  ablate->add_option("--out", out_dir);

  auto* curves = app.add_subcommand("curves", "Export predicted vs ground-truth score curves");
  curves->add_option("--checkpoint", checkpoint)->required();
  curves->add_option("--manifest", manifest)->required();
  curves->add_option("--out", out_dir)->required();
  curves->add_option("--budget", budget, "Summary length as a fraction of frames");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      const mfst::SyntheticConfig config = mfst::load_synthetic_config(config_path);
      const fs::path manifest_path = mfst::generate_synthetic(config, out_dir);
      std::vector<std::string> files{"manifest.json", "planted.json", "synthetic_config.json"};
      write_file(fs::path(out_dir) / "synthetic_config.json", mfst::read_text_file(config_path));
      mfst::write_output_manifest(out_dir, files);
      std::cout << "wrote " << config.num_videos << " videos to " << manifest_path.string() << '\n';
    } else if (train->parsed()) {
      mfst::ExperimentConfig config = experiment_config(config_path, setting, out_dir);
      std::vector<mfst::LoadedDataset> datasets;
      for (const fs::path& p : config.datasets) datasets.push_back(mfst::load_experiment_dataset(p));
      std::vector<std::vector<mfst::VideoRecord>> pools;
      for (const auto& d : datasets) pools.push_back(d.data.videos);
      const std::uint64_t seed = config.seed + 1;
      const mfst::Split split =
          mfst::make_splits(pools, config.setting, seed, config.eval_fraction);
      const auto& probe = split.train.front().features;
      mfst::FrameScoringModel model({probe.visual.cols(), probe.text.cols(), probe.audio.cols()},
                                    config.model, config.audio_enabled, seed);
      mfst::FitConfig fit = config.training;
      fit.seed = seed;
      const mfst::TrainingLog log = mfst::fit(model, split.train, fit);
      mfst::save_checkpoint(config.output_dir / "model.ckpt", model);
      std::ostringstream csv;
      csv << "epoch,loss\n";
      for (std::size_t e = 0; e < log.epoch_loss.size(); ++e) {
        csv << e + 1 << ',' << mfst::format_fixed(log.epoch_loss[e], 10) << '\n';
      }
      write_file(config.output_dir / "training_log.csv", csv.str());
      write_file(config.output_dir / "config.json", config.source_text);
      mfst::write_output_manifest(config.output_dir,
                                  {"model.ckpt", "training_log.csv", "config.json"});
      std::cout << "final loss " << mfst::format_fixed(log.epoch_loss.back(), 8) << '\n';
    } else if (eval->parsed()) {
      mfst::FrameScoringModel model = mfst::load_checkpoint(checkpoint);
      const mfst::Dataset data = mfst::load_dataset(manifest);
      mfst::ProtocolConfig protocol{budget, mfst::parse_aggregation(aggregation)};
      const mfst::EvalReport report = mfst::evaluate(model, data.videos, protocol);
      std::ostringstream text, csv;
      mfst::write_text_report(text, report);
      mfst::write_csv_report(csv, report);
      write_file(fs::path(out_dir) / "report.txt", text.str());
      write_file(fs::path(out_dir) / "report.csv", csv.str());
      mfst::write_output_manifest(out_dir, {"report.txt", "report.csv"});
      std::cout << text.str();
    } else if (experiment->parsed()) {
      const mfst::ExperimentConfig config = experiment_config(config_path, setting, out_dir);
      const mfst::AggregateReport report = mfst::run_experiment(config);
      mfst::write_experiment_outputs(config.output_dir, config, report);
      mfst::write_aggregate_text(std::cout, config, report);
    } else if (ablate->parsed()) {
      const mfst::ExperimentConfig config = experiment_config(config_path, setting, out_dir);
      const mfst::AblationReport report = mfst::run_ablation(config);
      mfst::write_ablation_outputs(config.output_dir, config, report);
      mfst::write_ablation_text(std::cout, config, report);
    } else if (curves->parsed()) {
      mfst::FrameScoringModel model = mfst::load_checkpoint(checkpoint);
      const mfst::Dataset data = mfst::load_dataset(manifest);
      mfst::ProtocolConfig protocol;
      protocol.budget_fraction = budget;
      const auto files = mfst::emit_curves(model, data.videos, out_dir, protocol);
      mfst::write_output_manifest(out_dir, files);
      std::cout << "wrote " << files.size() << " curve files to " << out_dir << '\n';
    }
  } catch (const mfst::Error& e) {
    std::cerr << "error [" << mfst::to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error [internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
