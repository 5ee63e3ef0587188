#pragma once

#include <random>
#include <string>
#include <vector>

#include "mfst/numerics/tensor.hpp"

namespace mfst {

/// A trainable tensor and its accumulated gradient (always the same shape).
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Tensor2 value)
      : name(std::move(name)), value(std::move(value)),
        grad(this->value.rows(), this->value.cols()) {}

  void zero_grad() { grad.fill(0.0); }

  std::string name;
  Tensor2 value;
  Tensor2 grad;
};

using ParameterList = std::vector<Parameter*>;

void zero_grads(const ParameterList& params);

/// Gaussian(0, std) entries drawn from `rng` in row-major order.
Tensor2 gaussian_tensor(std::size_t rows, std::size_t cols, double std, std::mt19937_64& rng);

}  // namespace mfst
