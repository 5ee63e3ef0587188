#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mfst/data/records.hpp"

namespace mfst {

/// Binary per-frame summary plus the segments that produced it.
struct SummarySelection {
  std::vector<std::uint8_t> mask;
  std::vector<std::size_t> segments;
  std::size_t total_frames = 0;
};

struct KnapsackResult {
  std::vector<std::size_t> chosen;  // ascending segment indices
  double value = 0.0;
  std::int64_t total_length = 0;
};

/// Mean frame score of each segment. Segments must partition the scores.
std::vector<double> segment_scores(std::span<const double> frame_scores,
                                   std::span<const Segment> segments);

/// Exact 0/1 knapsack by dynamic programming over capacity. Maximizes the
/// summed value with summed length <= budget. Among equal values the set with
/// fewer total frames wins, then the set whose sorted indices are
/// lexicographically smaller. Throws ValidationError on negative lengths or a
/// negative budget.
KnapsackResult knapsack(std::span<const double> values, std::span<const std::int64_t> lengths,
                        std::int64_t budget);

/// Knapsack over segments, expanded into a per-frame mask.
SummarySelection knapsack_select(std::span<const double> segment_values,
                                 std::span<const Segment> segments, std::size_t frames,
                                 std::size_t budget_frames);

/// ceil(fraction * frames), guarded against representation error in `fraction`.
std::size_t budget_frames(std::size_t frames, double fraction);

/// segment_scores followed by knapsack_select at ceil(fraction * N) frames.
SummarySelection summarize(std::span<const double> frame_scores, std::span<const Segment> segments,
                           double budget_fraction);

}  // namespace mfst
