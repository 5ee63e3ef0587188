#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mfst/data/records.hpp"

namespace mfst {

enum class Setting { kCanonical, kAugment, kTransfer };

Setting parse_setting(std::string_view text);
std::string_view to_string(Setting setting);

struct Split {
  std::vector<VideoRecord> train;
  std::vector<VideoRecord> eval;
};

/// Number of evaluation videos for a pool of `total`: round(total * fraction),
/// kept within [1, total - 1] when total >= 2.
std::size_t eval_count(std::size_t total, double eval_fraction);

/// Builds the train/eval partition for an experimental setting.
///
/// canonical: one dataset, seeded shuffle, the first eval_count() videos go to
///            evaluation.
/// augment:   two datasets concatenated in order, then as canonical.
/// transfer:  train on all of datasets[0], evaluate on all of datasets[1].
///
/// Throws ConfigError when the dataset count does not fit the setting.
Split make_splits(std::span<const std::vector<VideoRecord>> datasets, Setting setting,
                  std::uint64_t seed, double eval_fraction = 0.2);

}  // namespace mfst
