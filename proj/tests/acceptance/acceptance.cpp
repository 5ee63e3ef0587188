// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "mfst/error.hpp"
#include "mfst/eval/knapsack.hpp"
#include "mfst/eval/metrics.hpp"
#include "mfst/eval/protocol.hpp"
#include "mfst/harness/experiment.hpp"
#include "mfst/model/trainer.hpp"
#include "mfst/numerics/gradcheck.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

namespace fs = std::filesystem;
using namespace mfst;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

SyntheticConfig recovery_data(bool audio_dependent, std::uint64_t seed) {
  SyntheticConfig c;
  c.name = audio_dependent ? "synth_audio" : "synth_no_audio";
  c.num_videos = 40;
  c.seed = seed;
  c.audio_dependent = audio_dependent;
  return c;
}

fs::path ensure_dataset(const fs::path& work, const SyntheticConfig& config) {
  const fs::path dir = work / config.name;
  fs::remove_all(dir);
  return generate_synthetic(config, dir);
}

ExperimentConfig recovery_experiment(const fs::path& manifest) {
  ExperimentConfig c;
  c.datasets = {manifest};
  c.repeats = 5;
  c.seed = 1;
  c.training.epochs = 30;
  c.training.learning_rate = 1e-3;
  c.training.batch_size = 4;
  return c;
}

// --- 1 -----------------------------------------------------------------------
Outcome gradient_suite(const fs::path&) {
  Stopwatch clock;
  std::mt19937_64 rng(2024);
  const ModalityDims dims{6, 4, 2};
  TransformerConfig cfg;
  cfg.model_dim = 8;
  cfg.heads = 2;
  cfg.encoder_layers = 2;
  cfg.decoder_layers = 2;
  cfg.ff_dim = 16;
  cfg.init_std = 0.3;
  FrameScoringModel model(dims, cfg, true, 11);
  for (Parameter* p : model.parameters()) {
    if (p->name.find("bias") != std::string::npos) {
      p->value = oracle::random_tensor(p->value.rows(), p->value.cols(), rng, 0.1);
    }
  }
  FeatureBundle bundle;
  bundle.video_id = "toy";
  bundle.visual = oracle::random_tensor(8, dims.visual, rng);
  bundle.text = oracle::random_tensor(4, dims.text, rng);
  bundle.audio = oracle::random_tensor(8, dims.audio, rng);
  std::vector<double> target(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& t : target) t = u(rng);

  const ParameterList params = model.parameters();
  const GradCheckReport report = finite_difference_check(
      [&](ad::Tape& t) { return ad::mse(model.score(t, bundle), target); }, params, 1e-4);
  std::size_t coords = 0;
  for (const Parameter* p : params) coords += p->value.data().size();
  const double elapsed = clock.seconds();
  return {report.passed() && elapsed < 60.0,
          fmt("max rel err %.3g over %.0f coordinates in %.0f tensors, %.1f s", report.max_relative_error(),
              static_cast<double>(coords), static_cast<double>(params.size()), elapsed)};
}

// --- 2 -----------------------------------------------------------------------
Outcome overfit_check(const fs::path&) {
  Stopwatch clock;
  SyntheticConfig c;
  c.name = "overfit";
  c.num_videos = 1;
  c.frames_min = c.frames_max = 8;
  c.seed = 5;
  const SyntheticDataset data = synthesize(c);
  const std::vector<VideoRecord> batch{data.dataset.videos.front()};
  const FeatureBundle& f = batch[0].features;
  FrameScoringModel model({f.visual.cols(), f.text.cols(), f.audio.cols()}, TransformerConfig{}, true, 3);
  AdamState opt(AdamOptions{1e-3});
  double loss = 1.0;
  std::size_t steps = 0;
  while (steps < 2000) {
    train_step(model, batch, opt);
    ++steps;
    loss = loss_mse(batch[0].gt_scores, forward(model, f));
    if (loss < 1e-3) break;
  }
  const double elapsed = clock.seconds();
  return {loss < 1e-3 && elapsed < 120.0,
          fmt("loss %.3g after %.0f steps, %.1f s", loss, static_cast<double>(steps), elapsed)};
}

// --- 3 -----------------------------------------------------------------------
double random_planted_tau(const AggregateReport& report, const LoadedDataset& data) {
  double total = 0.0;
  for (const RunReport& run : report.runs) {
    std::mt19937_64 rng(run.seed * 7919 + 13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double tau = 0.0;
    for (const std::string& id : run.eval_ids) {
      const ScoreVector& planted = data.planted.at(id);
      ScoreVector guess(planted.size());
      for (double& g : guess) g = u(rng);
      tau += kendall_tau(planted, guess);
    }
    total += tau / static_cast<double>(run.eval_ids.size());
  }
  return total / static_cast<double>(report.runs.size());
}

Outcome synthetic_recovery(const fs::path& work) {
  Stopwatch clock;
  const fs::path manifest = ensure_dataset(work, recovery_data(true, 7));
  const std::vector<LoadedDataset> data{load_experiment_dataset(manifest)};
  const ExperimentConfig config = recovery_experiment(manifest);
  const AggregateReport report = run_experiment(config, data);
  write_experiment_outputs(work / "recovery_run", config, report);
  if (!report.planted_tau) return {false, "planted scores missing"};
  const double tau = report.planted_tau->mean;
  const double baseline = random_planted_tau(report, data[0]);
  bool loss_fell = true;
  for (const RunReport& r : report.runs) loss_fell = loss_fell && r.log.epoch_loss.back() < r.log.epoch_loss.front();
  const double elapsed = clock.seconds();
  return {tau >= 0.6 && tau - baseline >= 0.3 && loss_fell && elapsed < 900.0,
          fmt("planted tau %.4f (random %.4f), F %.4f, %.0f s", tau, baseline, report.f_score.mean, elapsed) +
              (loss_fell ? "" : ", training loss did not fall in every run")};
}

// --- 4 -----------------------------------------------------------------------
Outcome knapsack_oracle(const fs::path&) {
  std::mt19937_64 rng(4004);
  int matched = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 15)(rng);
    std::vector<double> values(n);
    std::vector<std::int64_t> lengths(n);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      lengths[i] = std::uniform_int_distribution<std::int64_t>(1, 20)(rng);
    }
    const std::int64_t total = std::accumulate(lengths.begin(), lengths.end(), std::int64_t{0});
    const std::int64_t budget = std::uniform_int_distribution<std::int64_t>(0, total)(rng);
    const KnapsackResult dp = knapsack(values, lengths, budget);
    const oracle::SubsetOptimum best = oracle::brute_force_knapsack(values, lengths, budget);
    if (dp.value == best.value && dp.total_length <= budget) ++matched;
  }
  return {matched == trials, fmt("%.0f/%.0f instances match exhaustive search", matched, trials)};
}

// --- 5 -----------------------------------------------------------------------
Outcome metric_oracles(const fs::path&) {
  std::mt19937_64 rng(5005);
  int tau_exact = 0;
  double rho_worst = 0.0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 60)(rng);
    const auto x = oracle::tied_vector(n, 5, rng);
    const auto y = oracle::tied_vector(n, 4, rng);
    if (kendall_tau(x, y) == oracle::pairwise_kendall_tau_b(x, y)) ++tau_exact;
    rho_worst = std::max(rho_worst, std::abs(spearman_rho(x, y) - oracle::direct_spearman(x, y)));
  }
  std::vector<double> distinct(50), reversed(50);
  std::iota(distinct.begin(), distinct.end(), 0.0);
  std::shuffle(distinct.begin(), distinct.end(), rng);
  for (std::size_t i = 0; i < 50; ++i) reversed[i] = -distinct[i];
  const double self = kendall_tau(distinct, distinct);
  const double rev = kendall_tau(distinct, reversed);
  return {tau_exact == trials && rho_worst < 1e-12 && self == 1.0 && rev == -1.0,
          fmt("tau exact %.0f/100, rho max err %.2g, tau(x,x)=%g, tau(x,rev)=%g", tau_exact, rho_worst,
              self, rev)};
}

// --- 6 -----------------------------------------------------------------------
Outcome random_baseline(const fs::path&) {
  SyntheticConfig c = recovery_data(true, 606);
  c.num_videos = 100;
  const SyntheticDataset data = synthesize(c);
  std::mt19937_64 rng(6006);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double tau = 0.0;
  const int evaluations = 1000;
  for (int e = 0; e < evaluations; ++e) {
    const VideoRecord& r = data.dataset.videos[static_cast<std::size_t>(e) % data.dataset.videos.size()];
    ScoreVector guess(r.frames());
    for (double& g : guess) g = u(rng);
    tau += evaluate_video(guess, r, {}).kendall_tau;
  }
  tau /= evaluations;
  return {std::abs(tau) <= 0.05, fmt("mean tau %.4f over 1000 evaluations", tau)};
}

// --- 7 -----------------------------------------------------------------------
ExperimentConfig ablation_experiment(const fs::path& manifest) {
  ExperimentConfig c = recovery_experiment(manifest);
  c.model.model_dim = 32;
  c.model.heads = 4;
  c.model.encoder_layers = 1;
  c.model.decoder_layers = 1;
  c.model.ff_dim = 64;
  return c;
}

Outcome ablation_direction(const fs::path& work) {
  Stopwatch clock;
  const fs::path dependent = ensure_dataset(work, recovery_data(true, 7));
  SyntheticConfig indep_cfg = recovery_data(false, 77);
  const fs::path independent = ensure_dataset(work, indep_cfg);

  const ExperimentConfig dep_config = ablation_experiment(dependent);
  const AblationReport dep = run_ablation(dep_config, {load_experiment_dataset(dependent)});
  write_ablation_outputs(work / "ablation_audio", dep_config, dep);
  const ExperimentConfig ind_config = ablation_experiment(independent);
  const AblationReport ind = run_ablation(ind_config, {load_experiment_dataset(independent)});
  write_ablation_outputs(work / "ablation_no_audio", ind_config, ind);

  int wins = 0;
  for (double d : dep.f_score_delta_per_run) wins += d >= 0.0 ? 1 : 0;
  const bool pass = wins >= 4 && std::abs(ind.f_score_delta) < 0.05;
  return {pass, fmt("audio-dependent: with >= without in %.0f/5 (mean delta %+.4f); "
                    "audio-independent delta %+.4f; %.0f s",
                    wins, dep.f_score_delta, ind.f_score_delta, clock.seconds())};
}

// --- 8 -----------------------------------------------------------------------
Outcome protocol_identity(const fs::path&) {
  const SyntheticDataset data = synthesize(recovery_data(true, 808));
  std::size_t checks = 0, perfect = 0;
  for (const VideoRecord& r : data.dataset.videos) {
    for (const ScoreVector& annotator : r.annotator_scores) {
      ++checks;
      if (f_score_protocol(annotator, r, {0.15, Aggregation::kMax}).aggregate.f_score == 1.0) ++perfect;
    }
  }
  return {perfect == checks,
          fmt("f == 1.0 in %.0f/%.0f annotator replays", static_cast<double>(perfect),
              static_cast<double>(checks))};
}

// --- 9 -----------------------------------------------------------------------
Outcome determinism(const fs::path& work) {
  Stopwatch clock;
  SyntheticConfig c = recovery_data(true, 909);
  c.name = "determinism";
  c.num_videos = 16;
  const fs::path manifest = ensure_dataset(work, c);
  ExperimentConfig config = recovery_experiment(manifest);
  config.repeats = 3;
  config.training.epochs = 4;
  config.model.model_dim = 16;
  config.model.heads = 2;
  config.model.ff_dim = 32;
  const std::vector<LoadedDataset> data{load_experiment_dataset(manifest)};
  const fs::path first = work / "determinism_a";
  write_experiment_outputs(first, config, run_experiment(config, data));
  write_experiment_outputs(work / "determinism_b", config, run_experiment(config, data));
  ExperimentConfig threaded = config;
  threaded.threads = 3;
  write_experiment_outputs(work / "determinism_c", threaded, run_experiment(threaded, data));
  std::size_t compared = 0, identical = 0;
  for (const auto& entry : fs::recursive_directory_iterator(first)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), first);
    for (const char* other : {"determinism_b", "determinism_c"}) {
      ++compared;
      if (mfst::testing::slurp(entry.path()) == mfst::testing::slurp(work / other / rel)) ++identical;
    }
  }
  const bool aggregate_same = mfst::testing::slurp(first / "aggregate.txt") ==
                              mfst::testing::slurp(work / "determinism_b/aggregate.txt");
  return {aggregate_same && identical == compared && compared > 0,
          fmt("%.0f/%.0f output file comparisons byte-identical across a rerun and a threaded rerun, %.1f s",
              static_cast<double>(identical), static_cast<double>(compared), clock.seconds())};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome(const fs::path&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string work_dir = (fs::temp_directory_path() / "mfst_acceptance").string();
  std::vector<int> only;
  app.add_option("--work-dir", work_dir, "Scratch directory for generated data and run outputs");
  app.add_option("--only", only, "Run just these criterion numbers");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "end-to-end gradients match finite differences", gradient_suite},
      {2, "single 8-frame video overfits", overfit_check},
      {3, "planted scores recovered on held-out synthetic videos", synthetic_recovery},
      {4, "knapsack equals exhaustive subset search", knapsack_oracle},
      {5, "rank metrics match definitional oracles", metric_oracles},
      {6, "random scores give tau near zero", random_baseline},
      {7, "audio ablation direction", ablation_direction},
      {8, "protocol returns 1.0 when replaying an annotator", protocol_identity},
      {9, "identical config gives byte-identical reports", determinism},
  };

  const fs::path work(work_dir);
  fs::create_directories(work);
  const std::set<int> selected(only.begin(), only.end());
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    Outcome outcome;
    try {
      outcome = c.run(work);
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    failures += outcome.pass ? 0 : 1;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " ("
              << outcome.detail << ")" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
