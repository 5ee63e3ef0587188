#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mfst/data/records.hpp"
#include "mfst/model/frame_scorer.hpp"
#include "mfst/numerics/adam.hpp"

namespace mfst {

/// (1/N) * sum (s_gt - s)^2. Throws DimensionError on length mismatch or N = 0.
double loss_mse(std::span<const double> s_gt, std::span<const double> s);

/// Forward, MSE against gt_scores per video, gradients averaged over the batch,
/// then one Adam update. Returns the mean loss before the update. Numeric
/// failures are rethrown with the offending video id.
double train_step(FrameScoringModel& model, std::span<const VideoRecord* const> batch,
                  AdamState& optimizer);
double train_step(FrameScoringModel& model, std::span<const VideoRecord> batch,
                  AdamState& optimizer);

struct FitConfig {
  std::size_t epochs = 30;
  double learning_rate = 1e-4;
  std::size_t batch_size = 4;
  std::uint64_t seed = 1;
  bool audio_enabled = true;
};

struct TrainingLog {
  /// Mean per-video loss of each epoch, measured before each batch's update.
  std::vector<double> epoch_loss;
};

/// Seeded per-epoch shuffling, mini-batches of batch_size videos.
TrainingLog fit(FrameScoringModel& model, std::span<const VideoRecord> train,
                const FitConfig& config);

}  // namespace mfst
