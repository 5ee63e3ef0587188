#include "mfst/numerics/adam.hpp"

#include <cmath>

#include "mfst/error.hpp"

namespace mfst {

void adam_step(const ParameterList& params, AdamState& state) {
  if (state.first_moment.empty() && state.step == 0) {
    for (const Parameter* p : params) {
      state.first_moment.emplace_back(p->value.rows(), p->value.cols());
      state.second_moment.emplace_back(p->value.rows(), p->value.cols());
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw DimensionError("adam_step: state tracks " + std::to_string(state.first_moment.size()) +
                         " parameters, got " + std::to_string(params.size()));
  }

  ++state.step;
  const AdamOptions& o = state.options;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(o.beta1, t);
  const double correction2 = 1.0 - std::pow(o.beta2, t);

  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    Tensor2& m = state.first_moment[i];
    Tensor2& v = state.second_moment[i];
    if (!m.same_shape(p.value) || !p.grad.same_shape(p.value)) {
      throw DimensionError("adam_step: shape drift on parameter " + p.name);
    }
    auto value = p.value.data();
    const auto grad = p.grad.data();
    auto md = m.data();
    auto vd = v.data();
    for (std::size_t k = 0; k < value.size(); ++k) {
      const double g = grad[k];
      md[k] = o.beta1 * md[k] + (1.0 - o.beta1) * g;
      vd[k] = o.beta2 * vd[k] + (1.0 - o.beta2) * g * g;
      const double m_hat = md[k] / correction1;
      const double v_hat = vd[k] / correction2;
      value[k] -= o.learning_rate * m_hat / (std::sqrt(v_hat) + o.epsilon);
    }
  }
}

}  // namespace mfst
