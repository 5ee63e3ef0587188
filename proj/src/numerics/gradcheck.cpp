#include "mfst/numerics/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "mfst/error.hpp"

namespace mfst {

double GradCheckReport::max_relative_error() const {
  double worst = 0.0;
  for (const auto& e : entries) worst = std::max(worst, e.max_relative_error);
  return worst;
}

namespace {

double evaluate(const std::function<ad::Var(ad::Tape&)>& loss) {
  ad::Tape tape(false);
  const ad::Var out = loss(tape);
  const Tensor2& v = out.value();
  if (v.rows() != 1 || v.cols() != 1) {
    throw DimensionError("finite_difference_check: loss must be 1x1, got " + shape_string(v));
  }
  if (!std::isfinite(v(0, 0))) throw NumericError("finite_difference_check: non-finite loss");
  return v(0, 0);
}

}  // namespace

GradCheckReport finite_difference_check(const std::function<ad::Var(ad::Tape&)>& loss,
                                        const ParameterList& params, double rel_tol,
                                        GradCheckOptions options) {
  zero_grads(params);
  {
    ad::Tape tape;
    const ad::Var out = loss(tape);
    if (!std::isfinite(out.value()(0, 0))) {
      throw NumericError("finite_difference_check: non-finite loss");
    }
    tape.backward(out);
  }

  GradCheckReport report;
  report.tolerance = rel_tol;
  const double h = options.step;
  for (Parameter* p : params) {
    GradientDiscrepancy entry;
    entry.parameter = p->name;
    auto values = p->value.data();
    const auto analytic = p->grad.data();
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double original = values[k];
      values[k] = original + h;
      const double plus = evaluate(loss);
      values[k] = original - h;
      const double minus = evaluate(loss);
      values[k] = original;

      const double numeric = (plus - minus) / (2.0 * h);
      const double abs_err = std::abs(analytic[k] - numeric);
      const double denom =
          std::max({std::abs(analytic[k]), std::abs(numeric), options.magnitude_floor});
      entry.max_absolute_error = std::max(entry.max_absolute_error, abs_err);
      entry.max_relative_error = std::max(entry.max_relative_error, abs_err / denom);
      entry.max_analytic_magnitude = std::max(entry.max_analytic_magnitude, std::abs(analytic[k]));
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace mfst
