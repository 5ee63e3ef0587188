#pragma once

#include <cstdint>
#include <vector>

#include "mfst/numerics/parameter.hpp"

namespace mfst {

struct AdamOptions {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment accumulators for a fixed, ordered parameter list. The first call to
/// adam_step sizes the moments; later calls must pass parameters of the same
/// shapes in the same order.
struct AdamState {
  AdamState() = default;
  explicit AdamState(AdamOptions options) : options(options) {}

  AdamOptions options;
  std::uint64_t step = 0;
  std::vector<Tensor2> first_moment;
  std::vector<Tensor2> second_moment;
};

/// One bias-corrected Adam update in place. Gradients are read, not cleared.
void adam_step(const ParameterList& params, AdamState& state);

}  // namespace mfst
