#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mfst/numerics/autodiff.hpp"

namespace mfst {

struct GradientDiscrepancy {
  std::string parameter;
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  double max_analytic_magnitude = 0.0;
};

struct GradCheckReport {
  std::vector<GradientDiscrepancy> entries;
  double tolerance = 0.0;

  double max_relative_error() const;
  bool passed() const { return max_relative_error() < tolerance; }
};

struct GradCheckOptions {
  double step = 1e-5;
  /// Denominator floor for the relative error, so coordinates whose true
  /// gradient is ~0 are judged on absolute error instead.
  double magnitude_floor = 1e-7;
};

/// Builds the loss on a fresh recording tape to get analytic gradients, then
/// compares them with central differences over every coordinate of every
/// parameter. Parameter values are restored afterwards; Parameter::grad is
/// left holding the analytic gradient.
///
/// Element error is |analytic - numeric| / max(|analytic|, |numeric|, floor).
/// Throws NumericError if any loss evaluation is non-finite.
GradCheckReport finite_difference_check(const std::function<ad::Var(ad::Tape&)>& loss,
                                        const ParameterList& params, double rel_tol,
                                        GradCheckOptions options = {});

}  // namespace mfst
