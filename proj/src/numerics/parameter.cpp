#include "mfst/numerics/parameter.hpp"

namespace mfst {

void zero_grads(const ParameterList& params) {
  for (Parameter* p : params) p->zero_grad();
}

Tensor2 gaussian_tensor(std::size_t rows, std::size_t cols, double std, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, std);
  Tensor2 t(rows, cols);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

}  // namespace mfst
