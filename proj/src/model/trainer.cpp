#include "mfst/model/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mfst/error.hpp"

namespace mfst {

double loss_mse(std::span<const double> s_gt, std::span<const double> s) {
  if (s_gt.size() != s.size()) {
    throw DimensionError("loss_mse: lengths differ, " + std::to_string(s_gt.size()) + " vs " +
                         std::to_string(s.size()));
  }
  if (s.empty()) throw DimensionError("loss_mse: empty score vectors");
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = s_gt[i] - s[i];
    total += d * d;
  }
  return total / static_cast<double>(s.size());
}

double train_step(FrameScoringModel& model, std::span<const VideoRecord* const> batch,
                  AdamState& optimizer) {
  if (batch.empty()) throw ConfigError("train_step: empty batch");
  const ParameterList params = model.parameters();
  zero_grads(params);
  const double weight = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (const VideoRecord* record : batch) {
    try {
      ad::Tape tape;
      const ad::Var loss = ad::mse(model.score(tape, record->features), record->gt_scores);
      total += loss.value()(0, 0);
      tape.backward(loss, weight);
    } catch (const NumericError& e) {
      throw NumericError("train_step on video " + record->id() + ": " + e.what());
    }
  }
  for (const Parameter* p : params) {
    if (!all_finite(p->grad)) throw NumericError("train_step: non-finite gradient in " + p->name);
  }
  adam_step(params, optimizer);
  return total * weight;
}

double train_step(FrameScoringModel& model, std::span<const VideoRecord> batch,
                  AdamState& optimizer) {
  std::vector<const VideoRecord*> ptrs;
  ptrs.reserve(batch.size());
  for (const VideoRecord& r : batch) ptrs.push_back(&r);
  return train_step(model, ptrs, optimizer);
}

TrainingLog fit(FrameScoringModel& model, std::span<const VideoRecord> train,
                const FitConfig& config) {
  if (train.empty()) throw ConfigError("fit: empty training set");
  if (config.batch_size == 0) throw ConfigError("fit: batch_size must be >= 1");
  model.set_audio_enabled(config.audio_enabled);

  AdamOptions options;
  options.learning_rate = config.learning_rate;
  AdamState optimizer(options);
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  TrainingLog log;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double weighted = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      std::vector<const VideoRecord*> batch;
      for (std::size_t i = start; i < stop; ++i) batch.push_back(&train[order[i]]);
      weighted += train_step(model, batch, optimizer) * static_cast<double>(batch.size());
    }
    const double mean = weighted / static_cast<double>(train.size());
    if (!std::isfinite(mean)) {
      throw NumericError("fit: non-finite loss in epoch " + std::to_string(epoch));
    }
    log.epoch_loss.push_back(mean);
  }
  return log;
}

}  // namespace mfst
