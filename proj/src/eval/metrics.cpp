#include "mfst/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mfst/error.hpp"

namespace mfst {

namespace {

void require_pair(std::span<const double> x, std::span<const double> y, const char* what) {
  if (x.size() != y.size()) {
    throw DimensionError(std::string(what) + ": lengths differ, " + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()));
  }
  if (x.size() < 2) throw DimensionError(std::string(what) + ": needs at least 2 values");
}

std::int64_t tie_pairs(std::int64_t run) { return run * (run - 1) / 2; }

// Sorts `idx` by y[idx] and returns the number of inversions (swaps).
std::int64_t merge_count(std::vector<std::size_t>& idx, std::vector<std::size_t>& scratch,
                         std::span<const double> y, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(idx, scratch, y, lo, mid) + merge_count(idx, scratch, y, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (y[idx[j]] < y[idx[i]]) {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[k++] = idx[j++];
    } else {
      scratch[k++] = idx[i++];
    }
  }
  while (i < mid) scratch[k++] = idx[i++];
  while (j < hi) scratch[k++] = idx[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            idx.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

PrecisionRecall precision_recall_f(std::span<const std::uint8_t> predicted,
                                   std::span<const std::uint8_t> reference) {
  if (predicted.size() != reference.size()) {
    throw DimensionError("precision_recall_f: mask lengths differ, " +
                         std::to_string(predicted.size()) + " vs " +
                         std::to_string(reference.size()));
  }
  std::size_t overlap = 0, n_pred = 0, n_ref = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] != 0, r = reference[i] != 0;
    overlap += p && r;
    n_pred += p;
    n_ref += r;
  }
  PrecisionRecall out;
  out.precision = n_pred == 0 ? 0.0 : static_cast<double>(overlap) / static_cast<double>(n_pred);
  out.recall = n_ref == 0 ? 0.0 : static_cast<double>(overlap) / static_cast<double>(n_ref);
  const double sum = out.precision + out.recall;
  out.f_score = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y, "kendall_tau");
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  std::int64_t x_ties = 0, joint_ties = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && x[idx[j]] == x[idx[i]]) ++j;
    x_ties += tie_pairs(static_cast<std::int64_t>(j - i));
    for (std::size_t a = i; a < j;) {
      std::size_t b = a + 1;
      while (b < j && y[idx[b]] == y[idx[a]]) ++b;
      joint_ties += tie_pairs(static_cast<std::int64_t>(b - a));
      a = b;
    }
    i = j;
  }

  std::vector<std::size_t> scratch(n);
  const std::int64_t swaps = merge_count(idx, scratch, y, 0, n);

  std::int64_t y_ties = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && y[idx[j]] == y[idx[i]]) ++j;
    y_ties += tie_pairs(static_cast<std::int64_t>(j - i));
    i = j;
  }

  const std::int64_t total = tie_pairs(static_cast<std::int64_t>(n));
  const std::int64_t untied_x = total - x_ties;
  const std::int64_t untied_y = total - y_ties;
  if (untied_x == 0 || untied_y == 0) return 0.0;
  const std::int64_t concordant_minus_discordant = total - x_ties - y_ties + joint_ties - 2 * swaps;
  return static_cast<double>(concordant_minus_discordant) /
         std::sqrt(static_cast<double>(untied_x) * static_cast<double>(untied_y));
}

std::vector<double> mid_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && values[idx[j]] == values[idx[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[idx[k]] = rank;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y, "pearson");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y, "spearman_rho");
  const std::vector<double> rx = mid_ranks(x);
  const std::vector<double> ry = mid_ranks(y);
  return pearson(rx, ry);
}

}  // namespace mfst
