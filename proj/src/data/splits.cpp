#include "mfst/data/splits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "mfst/error.hpp"

namespace mfst {

Setting parse_setting(std::string_view text) {
  if (text == "canonical") return Setting::kCanonical;
  if (text == "augment") return Setting::kAugment;
  if (text == "transfer") return Setting::kTransfer;
  throw ConfigError("unknown setting '" + std::string(text) +
                    "', expected canonical|augment|transfer");
}

std::string_view to_string(Setting setting) {
  switch (setting) {
    case Setting::kCanonical: return "canonical";
    case Setting::kAugment: return "augment";
    case Setting::kTransfer: return "transfer";
  }
  return "unknown";
}

std::size_t eval_count(std::size_t total, double eval_fraction) {
  if (total < 2) return total;
  const auto wanted = static_cast<std::size_t>(std::llround(static_cast<double>(total) * eval_fraction));
  return std::clamp<std::size_t>(wanted, 1, total - 1);
}

Split make_splits(std::span<const std::vector<VideoRecord>> datasets, Setting setting,
                  std::uint64_t seed, double eval_fraction) {
  if (!(eval_fraction > 0.0 && eval_fraction < 1.0)) {
    throw ConfigError("eval_fraction must lie in (0,1), got " + std::to_string(eval_fraction));
  }
  const std::size_t needed = setting == Setting::kCanonical ? 1 : 2;
  if (datasets.size() != needed) {
    throw ConfigError(std::string(to_string(setting)) + " setting needs " +
                      std::to_string(needed) + " dataset(s), got " +
                      std::to_string(datasets.size()));
  }

  Split split;
  if (setting == Setting::kTransfer) {
    split.train = datasets[0];
    split.eval = datasets[1];
    return split;
  }

  std::vector<const VideoRecord*> pool;
  for (const auto& ds : datasets) {
    for (const VideoRecord& r : ds) pool.push_back(&r);
  }
  if (pool.size() < 2) throw ConfigError("need at least 2 videos to split");
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t n_eval = eval_count(pool.size(), eval_fraction);
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_eval ? split.eval : split.train).push_back(*pool[order[i]]);
  }
  return split;
}

}  // namespace mfst
