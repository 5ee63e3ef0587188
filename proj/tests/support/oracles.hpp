#pragma once

// Independent reference implementations used only by tests. They follow the
// textbook definitions directly and share no code with the library.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "mfst/numerics/tensor.hpp"

namespace mfst::oracle {

inline Tensor2 triple_loop_matmul(const Tensor2& a, const Tensor2& b) {
  Tensor2 out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

/// Element-by-element softmax(q k^T / sqrt(d)) v without max subtraction.
inline Tensor2 direct_attention(const Tensor2& q, const Tensor2& k, const Tensor2& v) {
  const double d = static_cast<double>(q.cols());
  Tensor2 out(q.rows(), v.cols());
  for (std::size_t i = 0; i < q.rows(); ++i) {
    std::vector<double> w(k.rows());
    double z = 0.0;
    for (std::size_t j = 0; j < k.rows(); ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < q.cols(); ++c) s += q(i, c) * k(j, c);
      w[j] = std::exp(s / std::sqrt(d));
      z += w[j];
    }
    for (std::size_t j = 0; j < k.rows(); ++j) {
      for (std::size_t c = 0; c < v.cols(); ++c) out(i, c) += w[j] / z * v(j, c);
    }
  }
  return out;
}

/// x W + b, row by row.
inline Tensor2 direct_affine(const Tensor2& x, const Tensor2& w, const Tensor2& b) {
  Tensor2 out(x.rows(), w.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < w.cols(); ++j) {
      double acc = b(0, j);
      for (std::size_t k = 0; k < x.cols(); ++k) acc += x(i, k) * w(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

struct SubsetOptimum {
  double value = 0.0;
  std::int64_t length = 0;
};

/// Best value over all subsets with total length <= budget. Subset sums are
/// accumulated from the highest index down.
inline SubsetOptimum brute_force_knapsack(const std::vector<double>& values,
                                          const std::vector<std::int64_t>& lengths,
                                          std::int64_t budget) {
  const std::size_t n = values.size();
  SubsetOptimum best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double v = 0.0;
    std::int64_t l = 0;
    for (std::size_t i = n; i-- > 0;) {
      if (mask >> i & 1) {
        v = values[i] + v;
        l += lengths[i];
      }
    }
    if (l > budget) continue;
    if (v > best.value || (v == best.value && l < best.length)) best = {v, l};
  }
  return best;
}

/// Tau-b by explicit pair enumeration.
inline double pairwise_kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::int64_t concordant = 0, discordant = 0, tied_x = 0, tied_y = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ++total;
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0.0) ++tied_x;
      if (dy == 0.0) ++tied_y;
      if (dx == 0.0 || dy == 0.0) continue;
      if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const std::int64_t ux = total - tied_x, uy = total - tied_y;
  if (ux == 0 || uy == 0) return 0.0;
  return static_cast<double>(concordant - discordant) /
         std::sqrt(static_cast<double>(ux) * static_cast<double>(uy));
}

/// Mid-rank of each value by counting: (#less) + (#equal + 1) / 2.
inline std::vector<double> counting_mid_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0.0, equal = 0.0;
    for (double w : v) {
      if (w < v[i]) less += 1.0;
      if (w == v[i]) equal += 1.0;
    }
    r[i] = less + (equal + 1.0) / 2.0;
  }
  return r;
}

inline double direct_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

inline double direct_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return direct_pearson(counting_mid_ranks(x), counting_mid_ranks(y));
}

/// Values drawn from a small grid so ties are frequent.
inline std::vector<double> tied_vector(std::size_t n, int levels, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, levels - 1);
  std::vector<double> out(n);
  for (double& v : out) v = static_cast<double>(pick(rng)) / static_cast<double>(levels);
  return out;
}

inline Tensor2 random_tensor(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                             double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Tensor2 t(rows, cols);
  for (double& v : t.data()) v = d(rng);
  return t;
}

}  // namespace mfst::oracle
