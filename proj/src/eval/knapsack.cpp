#include "mfst/eval/knapsack.hpp"

#include <cmath>

#include "mfst/error.hpp"

namespace mfst {

std::vector<double> segment_scores(std::span<const double> frame_scores,
                                   std::span<const Segment> segments) {
  validate_partition(segments, frame_scores.size());
  std::vector<double> out;
  out.reserve(segments.size());
  for (const Segment& s : segments) {
    double total = 0.0;
    for (std::size_t f = s.start; f < s.end; ++f) total += frame_scores[f];
    out.push_back(total / static_cast<double>(s.length()));
  }
  return out;
}

KnapsackResult knapsack(std::span<const double> values, std::span<const std::int64_t> lengths,
                        std::int64_t budget) {
  if (values.size() != lengths.size()) {
    throw DimensionError("knapsack: " + std::to_string(values.size()) + " values vs " +
                         std::to_string(lengths.size()) + " lengths");
  }
  if (budget < 0) throw ValidationError("knapsack: negative budget " + std::to_string(budget));
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] < 0) {
      throw ValidationError("knapsack: negative length " + std::to_string(lengths[i]) +
                            " for item " + std::to_string(i));
    }
  }

  // best[i][c]: optimum over items i..n-1 with capacity c. Filling from the
  // back makes "prefer including i" the lower-index tie-break.
  struct Cell {
    double value = 0.0;
    std::int64_t length = 0;
    bool take = false;
  };
  const std::size_t n = values.size();
  const auto width = static_cast<std::size_t>(budget) + 1;
  std::vector<Cell> best((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t c) -> Cell& { return best[i * width + c]; };

  for (std::size_t i = n; i-- > 0;) {
    const auto len = static_cast<std::size_t>(lengths[i]);
    for (std::size_t c = 0; c < width; ++c) {
      const Cell& skip = at(i + 1, c);
      Cell& cell = at(i, c);
      cell = {skip.value, skip.length, false};
      if (len > c) continue;
      const Cell& rest = at(i + 1, c - len);
      const double take_value = values[i] + rest.value;
      const std::int64_t take_length = lengths[i] + rest.length;
      const bool better = take_value > skip.value ||
                          (take_value == skip.value && take_length <= skip.length);
      if (better) cell = {take_value, take_length, true};
    }
  }

  KnapsackResult result;
  std::size_t c = width - 1;
  result.value = at(0, c).value;
  result.total_length = at(0, c).length;
  for (std::size_t i = 0; i < n; ++i) {
    if (at(i, c).take) {
      result.chosen.push_back(i);
      c -= static_cast<std::size_t>(lengths[i]);
    }
  }
  return result;
}

SummarySelection knapsack_select(std::span<const double> segment_values,
                                 std::span<const Segment> segments, std::size_t frames,
                                 std::size_t budget_frames) {
  validate_partition(segments, frames);
  std::vector<std::int64_t> lengths;
  lengths.reserve(segments.size());
  for (const Segment& s : segments) lengths.push_back(static_cast<std::int64_t>(s.length()));
  const KnapsackResult k =
      knapsack(segment_values, lengths, static_cast<std::int64_t>(budget_frames));

  SummarySelection sel;
  sel.mask.assign(frames, 0);
  sel.segments = k.chosen;
  for (std::size_t idx : k.chosen) {
    for (std::size_t f = segments[idx].start; f < segments[idx].end; ++f) sel.mask[f] = 1;
  }
  sel.total_frames = static_cast<std::size_t>(k.total_length);
  return sel;
}

std::size_t budget_frames(std::size_t frames, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ConfigError("budget fraction must lie in [0,1], got " + std::to_string(fraction));
  }
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(frames) - 1e-9));
}

SummarySelection summarize(std::span<const double> frame_scores, std::span<const Segment> segments,
                           double budget_fraction) {
  const std::vector<double> values = segment_scores(frame_scores, segments);
  return knapsack_select(values, segments, frame_scores.size(),
                         budget_frames(frame_scores.size(), budget_fraction));
}

}  // namespace mfst
