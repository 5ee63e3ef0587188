#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mfst {

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
};

/// Frame-level overlap between a predicted and a reference summary mask.
/// An empty prediction has precision 0, an empty reference has recall 0, and
/// f is 0 whenever p + r is 0.
PrecisionRecall precision_recall_f(std::span<const std::uint8_t> predicted,
                                   std::span<const std::uint8_t> reference);

/// Kendall's tau-b with tie correction, O(n log n) (Knight's merge-sort
/// counting). Returns 0 when either input is constant. Needs n >= 2.
double kendall_tau(std::span<const double> x, std::span<const double> y);

/// Average ranks (1-based), ties sharing the mean of their positions.
std::vector<double> mid_ranks(std::span<const double> values);

/// Pearson correlation; 0 when either input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of mid-ranks. Needs n >= 2.
double spearman_rho(std::span<const double> x, std::span<const double> y);

}  // namespace mfst
