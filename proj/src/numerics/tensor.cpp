#include "mfst/numerics/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "mfst/error.hpp"

namespace mfst {

namespace {

void require_same_shape(const Tensor2& a, const Tensor2& b, const char* op) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_string(a) +
                         " vs " + shape_string(b));
  }
}

void require_row_of(const Tensor2& row, const Tensor2& x, const char* op) {
  if (row.rows() != 1 || row.cols() != x.cols()) {
    throw DimensionError(std::string(op) + ": expected 1x" + std::to_string(x.cols()) +
                         " row, got " + shape_string(row));
  }
}

}  // namespace

Tensor2::Tensor2(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor2::Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("Tensor2: " + std::to_string(data_.size()) +
                         " values do not fill " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
}

Tensor2 Tensor2::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("Tensor2::from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor2(r, c, std::move(data));
}

Tensor2 Tensor2::identity(std::size_t n) {
  Tensor2 t(n, n);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

Tensor2 Tensor2::row_vector(std::span<const double> values) {
  return Tensor2(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

Tensor2 Tensor2::column_vector(std::span<const double> values) {
  return Tensor2(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

void Tensor2::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

std::string shape_string(const Tensor2& t) {
  return std::to_string(t.rows()) + "x" + std::to_string(t.cols());
}

bool all_finite(const Tensor2& t) {
  return std::all_of(t.data().begin(), t.data().end(),
                     [](double v) { return std::isfinite(v); });
}

double max_abs_difference(const Tensor2& a, const Tensor2& b) {
  require_same_shape(a, b, "max_abs_difference");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: cannot multiply " + shape_string(a) + " by " +
                         shape_string(b));
  }
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  Tensor2 out(n, m);
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  double* po = out.data().data();
  for (std::size_t i = 0; i < n; ++i) {
    double* orow = po + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = pa[i * k + p];
      const double* brow = pb + p * m;
      for (std::size_t j = 0; j < m; ++j) orow[j] += av * brow[j];
    }
  }
  return out;
}

Tensor2 matmul_nt(const Tensor2& a, const Tensor2& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_nt: cannot multiply " + shape_string(a) +
                         " by transpose of " + shape_string(b));
  }
  const std::size_t n = a.rows(), k = a.cols(), m = b.rows();
  Tensor2 out(n, m);
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = pa + i * k;
    for (std::size_t j = 0; j < m; ++j) {
      const double* brow = pb + j * k;
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      out(i, j) = acc;
    }
  }
  return out;
}

Tensor2 matmul_tn(const Tensor2& a, const Tensor2& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("matmul_tn: cannot multiply transpose of " + shape_string(a) +
                         " by " + shape_string(b));
  }
  const std::size_t n = a.cols(), k = a.rows(), m = b.cols();
  Tensor2 out(n, m);
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  double* po = out.data().data();
  for (std::size_t p = 0; p < k; ++p) {
    const double* arow = pa + p * n;
    const double* brow = pb + p * m;
    for (std::size_t i = 0; i < n; ++i) {
      const double av = arow[i];
      double* orow = po + i * m;
      for (std::size_t j = 0; j < m; ++j) orow[j] += av * brow[j];
    }
  }
  return out;
}

Tensor2 transpose(const Tensor2& a) {
  Tensor2 out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  }
  return out;
}

Tensor2 add(const Tensor2& a, const Tensor2& b) {
  require_same_shape(a, b, "add");
  Tensor2 out = a;
  add_in_place(out, b);
  return out;
}

void add_in_place(Tensor2& target, const Tensor2& source) {
  require_same_shape(target, source, "add_in_place");
  auto t = target.data();
  auto s = source.data();
  for (std::size_t i = 0; i < t.size(); ++i) t[i] += s[i];
}

Tensor2 add_row(const Tensor2& x, const Tensor2& row) {
  require_row_of(row, x, "add_row");
  Tensor2 out = x;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto dst = out.row(r);
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += row(0, c);
  }
  return out;
}

Tensor2 scale(const Tensor2& x, double factor) {
  Tensor2 out = x;
  for (double& v : out.data()) v *= factor;
  return out;
}

Tensor2 softmax_rows(const Tensor2& x) {
  Tensor2 out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto in = x.row(r);
    auto dst = out.row(r);
    if (in.empty()) continue;
    const double peak = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    for (std::size_t c = 0; c < in.size(); ++c) {
      dst[c] = std::exp(in[c] - peak);
      total += dst[c];
    }
    for (double& v : dst) v /= total;
  }
  return out;
}

Tensor2 layer_norm(const Tensor2& x, const Tensor2& gain, const Tensor2& bias) {
  require_row_of(gain, x, "layer_norm gain");
  require_row_of(bias, x, "layer_norm bias");
  Tensor2 out(x.rows(), x.cols());
  const double width = static_cast<double>(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto in = x.row(r);
    auto dst = out.row(r);
    double mean = 0.0;
    for (double v : in) mean += v;
    mean /= width;
    double var = 0.0;
    for (double v : in) var += (v - mean) * (v - mean);
    var /= width;
    const double inv_std = 1.0 / std::sqrt(var + kLayerNormEpsilon);
    for (std::size_t c = 0; c < in.size(); ++c) {
      dst[c] = gain(0, c) * (in[c] - mean) * inv_std + bias(0, c);
    }
  }
  return out;
}

Tensor2 attention(const Tensor2& query, const Tensor2& key, const Tensor2& value) {
  if (query.cols() != key.cols()) {
    throw DimensionError("attention: query " + shape_string(query) +
                         " and key " + shape_string(key) + " widths differ");
  }
  if (key.rows() != value.rows()) {
    throw DimensionError("attention: key " + shape_string(key) + " and value " +
                         shape_string(value) + " row counts differ");
  }
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(query.cols()));
  return matmul(softmax_rows(scale(matmul_nt(query, key), inv_sqrt)), value);
}

Tensor2 sinusoidal_positions(std::size_t length, std::size_t dim) {
  if (dim % 2 != 0) {
    throw ConfigError("sinusoidal_positions: dimension must be even, got " +
                      std::to_string(dim));
  }
  Tensor2 out(length, dim);
  for (std::size_t p = 0; p < length; ++p) {
    for (std::size_t i = 0; i < dim / 2; ++i) {
      const double exponent = static_cast<double>(2 * i) / static_cast<double>(dim);
      const double angle = static_cast<double>(p) / std::pow(10000.0, exponent);
      out(p, 2 * i) = std::sin(angle);
      out(p, 2 * i + 1) = std::cos(angle);
    }
  }
  return out;
}

Tensor2 concat_cols(const Tensor2& a, const Tensor2& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("concat_cols: row counts differ, " + shape_string(a) + " vs " +
                         shape_string(b));
  }
  Tensor2 out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(a.row(r).begin(), a.row(r).end(), dst.begin());
    std::copy(b.row(r).begin(), b.row(r).end(), dst.begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  return out;
}

}  // namespace mfst
