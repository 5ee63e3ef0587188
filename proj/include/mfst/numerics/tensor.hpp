#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mfst {

/// Dense row-major matrix of doubles. Every intermediate representation in the
/// pipeline (projected modalities, attention outputs, fused sequences) is a
/// Tensor2 with one row per frame or caption token.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0);
  Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Tensor2 from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor2 identity(std::size_t n);
  static Tensor2 row_vector(std::span<const double> values);
  static Tensor2 column_vector(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void fill(double value);
  bool same_shape(const Tensor2& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Tensor2&, const Tensor2&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// "RxC", used in error messages.
std::string shape_string(const Tensor2& t);

bool all_finite(const Tensor2& t);
double max_abs_difference(const Tensor2& a, const Tensor2& b);

// Plain kernels. The differentiable versions in autodiff.hpp are built on these.

Tensor2 matmul(const Tensor2& a, const Tensor2& b);
/// a * b^T
Tensor2 matmul_nt(const Tensor2& a, const Tensor2& b);
/// a^T * b
Tensor2 matmul_tn(const Tensor2& a, const Tensor2& b);
Tensor2 transpose(const Tensor2& a);

Tensor2 add(const Tensor2& a, const Tensor2& b);
/// Adds a 1xC row to every row of x.
Tensor2 add_row(const Tensor2& x, const Tensor2& row);
Tensor2 scale(const Tensor2& x, double factor);
void add_in_place(Tensor2& target, const Tensor2& source);

/// Row-wise softmax with row-max subtraction.
Tensor2 softmax_rows(const Tensor2& x);

inline constexpr double kLayerNormEpsilon = 1e-5;

/// Normalizes each row to zero mean and unit (population) variance, then
/// applies gain and bias, both 1xC.
Tensor2 layer_norm(const Tensor2& x, const Tensor2& gain, const Tensor2& bias);

/// softmax(q k^T / sqrt(q.cols)) v, unmasked.
Tensor2 attention(const Tensor2& query, const Tensor2& key, const Tensor2& value);

/// Fixed sinusoidal encodings: column 2i is sin(p / 10000^(2i/dim)) and column
/// 2i+1 is the matching cosine. `dim` must be even.
Tensor2 sinusoidal_positions(std::size_t length, std::size_t dim);

Tensor2 concat_cols(const Tensor2& a, const Tensor2& b);

}  // namespace mfst
