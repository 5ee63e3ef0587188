#include "mfst/numerics/autodiff.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mfst/error.hpp"

namespace mfst::ad {

const Tensor2& Var::value() const { return tape_->value(index_); }

Var Tape::constant(Tensor2 value) {
  if (!all_finite(value)) throw NumericError("constant contains a non-finite value");
  nodes_.push_back(Node{std::move(value), {}, {}, nullptr, false});
  return Var(this, nodes_.size() - 1);
}

Var Tape::parameter(Parameter& param) {
  if (!record_) return constant(param.value);
  if (auto it = param_nodes_.find(&param); it != param_nodes_.end()) {
    return Var(this, it->second);
  }
  if (!all_finite(param.value)) {
    throw NumericError("parameter " + param.name + " contains a non-finite value");
  }
  nodes_.push_back(Node{param.value, {}, {}, &param, true});
  param_nodes_.emplace(&param, nodes_.size() - 1);
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Tensor2 value, std::span<const Var> inputs, Backward backward) {
  if (!all_finite(value)) throw NumericError("operation produced a non-finite value");
  bool needs = false;
  if (record_) {
    for (const Var& in : inputs) {
      if (&in.tape() != this) throw DimensionError("op mixes vars from different tapes");
      needs = needs || nodes_[in.index()].requires_grad;
    }
  }
  nodes_.push_back(Node{std::move(value), {}, needs ? std::move(backward) : Backward{},
                        nullptr, needs});
  return Var(this, nodes_.size() - 1);
}

void Tape::backward(Var output, double seed) {
  if (!record_) throw ConfigError("backward() on a tape that does not record");
  const Tensor2& out = value(output.index());
  if (out.rows() != 1 || out.cols() != 1) {
    throw DimensionError("backward() needs a 1x1 output, got " + shape_string(out));
  }
  for (Node& node : nodes_) {
    if (node.requires_grad) node.grad = Tensor2(node.value.rows(), node.value.cols());
  }
  if (!nodes_[output.index()].requires_grad) return;
  nodes_[output.index()].grad(0, 0) = seed;
  for (std::size_t i = output.index() + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (!node.requires_grad) continue;
    if (node.backward) node.backward(*this, i);
    if (node.param != nullptr) add_in_place(node.param->grad, node.grad);
  }
}

namespace {

void accumulate(Tape& tape, Var v, const Tensor2& g) {
  if (tape.requires_grad(v.index())) add_in_place(tape.grad(v.index()), g);
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape& tape = a.tape();
  const std::array inputs{a, b};
  return tape.record(mfst::matmul(a.value(), b.value()), inputs,
                     [a, b](Tape& t, std::size_t self) {
                       const Tensor2& g = t.grad(self);
                       if (t.requires_grad(a.index())) accumulate(t, a, mfst::matmul_nt(g, b.value()));
                       if (t.requires_grad(b.index())) accumulate(t, b, mfst::matmul_tn(a.value(), g));
                     });
}

Var matmul_nt(Var a, Var b) {
  Tape& tape = a.tape();
  const std::array inputs{a, b};
  return tape.record(mfst::matmul_nt(a.value(), b.value()), inputs,
                     [a, b](Tape& t, std::size_t self) {
                       const Tensor2& g = t.grad(self);
                       // out = a b^T: da = g b, db = g^T a
                       if (t.requires_grad(a.index())) accumulate(t, a, mfst::matmul(g, b.value()));
                       if (t.requires_grad(b.index())) accumulate(t, b, mfst::matmul_tn(g, a.value()));
                     });
}

Var add(Var a, Var b) {
  Tape& tape = a.tape();
  const std::array inputs{a, b};
  return tape.record(mfst::add(a.value(), b.value()), inputs,
                     [a, b](Tape& t, std::size_t self) {
                       const Tensor2& g = t.grad(self);
                       accumulate(t, a, g);
                       accumulate(t, b, g);
                     });
}

Var add_row(Var x, Var row) {
  Tape& tape = x.tape();
  const std::array inputs{x, row};
  return tape.record(mfst::add_row(x.value(), row.value()), inputs,
                     [x, row](Tape& t, std::size_t self) {
                       const Tensor2& g = t.grad(self);
                       accumulate(t, x, g);
                       if (t.requires_grad(row.index())) {
                         Tensor2 summed(1, g.cols());
                         for (std::size_t r = 0; r < g.rows(); ++r) {
                           for (std::size_t c = 0; c < g.cols(); ++c) summed(0, c) += g(r, c);
                         }
                         accumulate(t, row, summed);
                       }
                     });
}

Var scale(Var x, double factor) {
  Tape& tape = x.tape();
  const std::array inputs{x};
  return tape.record(mfst::scale(x.value(), factor), inputs,
                     [x, factor](Tape& t, std::size_t self) {
                       accumulate(t, x, mfst::scale(t.grad(self), factor));
                     });
}

Var relu(Var x) {
  Tape& tape = x.tape();
  Tensor2 out = x.value();
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  const std::array inputs{x};
  return tape.record(std::move(out), inputs, [x](Tape& t, std::size_t self) {
    Tensor2 g = t.grad(self);
    const auto in = x.value().data();
    auto gd = g.data();
    for (std::size_t i = 0; i < gd.size(); ++i) {
      if (in[i] <= 0.0) gd[i] = 0.0;
    }
    accumulate(t, x, g);
  });
}

Var sigmoid(Var x) {
  Tape& tape = x.tape();
  Tensor2 out = x.value();
  for (double& v : out.data()) v = 1.0 / (1.0 + std::exp(-v));
  const std::array inputs{x};
  return tape.record(std::move(out), inputs, [x](Tape& t, std::size_t self) {
    Tensor2 g = t.grad(self);
    const auto y = t.value(self).data();
    auto gd = g.data();
    for (std::size_t i = 0; i < gd.size(); ++i) gd[i] *= y[i] * (1.0 - y[i]);
    accumulate(t, x, g);
  });
}

Var softmax_rows(Var x) {
  Tape& tape = x.tape();
  const std::array inputs{x};
  return tape.record(mfst::softmax_rows(x.value()), inputs, [x](Tape& t, std::size_t self) {
    const Tensor2& y = t.value(self);
    const Tensor2& gy = t.grad(self);
    Tensor2 gx(y.rows(), y.cols());
    for (std::size_t r = 0; r < y.rows(); ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < y.cols(); ++c) dot += gy(r, c) * y(r, c);
      for (std::size_t c = 0; c < y.cols(); ++c) gx(r, c) = y(r, c) * (gy(r, c) - dot);
    }
    accumulate(t, x, gx);
  });
}

Var layer_norm(Var x, Var gain, Var bias) {
  Tape& tape = x.tape();
  const Tensor2& xv = x.value();
  const std::size_t rows = xv.rows(), cols = xv.cols();
  Tensor2 out = mfst::layer_norm(xv, gain.value(), bias.value());

  // Keep normalized activations and per-row inverse std for the backward pass.
  Tensor2 normalized(rows, cols);
  std::vector<double> inv_std(rows);
  const double width = static_cast<double>(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    double mean = 0.0;
    for (double v : xv.row(r)) mean += v;
    mean /= width;
    double var = 0.0;
    for (double v : xv.row(r)) var += (v - mean) * (v - mean);
    var /= width;
    inv_std[r] = 1.0 / std::sqrt(var + kLayerNormEpsilon);
    for (std::size_t c = 0; c < cols; ++c) normalized(r, c) = (xv(r, c) - mean) * inv_std[r];
  }

  const std::array inputs{x, gain, bias};
  return tape.record(
      std::move(out), inputs,
      [x, gain, bias, normalized = std::move(normalized), inv_std = std::move(inv_std)](
          Tape& t, std::size_t self) {
        const Tensor2& gy = t.grad(self);
        const std::size_t rows = gy.rows(), cols = gy.cols();
        const double width = static_cast<double>(cols);
        if (t.requires_grad(gain.index()) || t.requires_grad(bias.index())) {
          Tensor2 g_gain(1, cols), g_bias(1, cols);
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
              g_gain(0, c) += gy(r, c) * normalized(r, c);
              g_bias(0, c) += gy(r, c);
            }
          }
          accumulate(t, gain, g_gain);
          accumulate(t, bias, g_bias);
        }
        if (!t.requires_grad(x.index())) return;
        const Tensor2& g = gain.value();
        Tensor2 gx(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
          double mean_d = 0.0, mean_dn = 0.0;
          for (std::size_t c = 0; c < cols; ++c) {
            const double d = gy(r, c) * g(0, c);
            mean_d += d;
            mean_dn += d * normalized(r, c);
          }
          mean_d /= width;
          mean_dn /= width;
          for (std::size_t c = 0; c < cols; ++c) {
            const double d = gy(r, c) * g(0, c);
            gx(r, c) = inv_std[r] * (d - mean_d - normalized(r, c) * mean_dn);
          }
        }
        accumulate(t, x, gx);
      });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no inputs");
  Tape& tape = parts.front().tape();
  const std::size_t rows = parts.front().rows();
  std::size_t cols = 0;
  for (const Var& p : parts) {
    if (p.rows() != rows) {
      throw DimensionError("concat_cols: row counts differ, " + std::to_string(rows) +
                           " vs " + std::to_string(p.rows()));
    }
    cols += p.cols();
  }
  Tensor2 out(rows, cols);
  std::size_t offset = 0;
  for (const Var& p : parts) {
    const Tensor2& v = p.value();
    for (std::size_t r = 0; r < rows; ++r) {
      std::copy(v.row(r).begin(), v.row(r).end(), out.row(r).begin() + static_cast<std::ptrdiff_t>(offset));
    }
    offset += v.cols();
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return tape.record(std::move(out), inputs, [inputs](Tape& t, std::size_t self) {
    const Tensor2& g = t.grad(self);
    std::size_t off = 0;
    for (const Var& p : inputs) {
      const std::size_t w = p.cols();
      if (t.requires_grad(p.index())) {
        Tensor2 part(g.rows(), w);
        for (std::size_t r = 0; r < g.rows(); ++r) {
          for (std::size_t c = 0; c < w; ++c) part(r, c) = g(r, off + c);
        }
        accumulate(t, p, part);
      }
      off += w;
    }
  });
}

Var slice_cols(Var x, std::size_t begin, std::size_t count) {
  const Tensor2& v = x.value();
  if (begin + count > v.cols()) {
    throw DimensionError("slice_cols: [" + std::to_string(begin) + ", " +
                         std::to_string(begin + count) + ") out of range for " +
                         shape_string(v));
  }
  Tensor2 out(v.rows(), count);
  for (std::size_t r = 0; r < v.rows(); ++r) {
    for (std::size_t c = 0; c < count; ++c) out(r, c) = v(r, begin + c);
  }
  const std::array inputs{x};
  return x.tape().record(std::move(out), inputs, [x, begin](Tape& t, std::size_t self) {
    const Tensor2& g = t.grad(self);
    Tensor2& gx = t.grad(x.index());
    for (std::size_t r = 0; r < g.rows(); ++r) {
      for (std::size_t c = 0; c < g.cols(); ++c) gx(r, begin + c) += g(r, c);
    }
  });
}

Var attention(Var query, Var key, Var value) {
  if (query.cols() != key.cols()) {
    throw DimensionError("attention: query " + shape_string(query.value()) + " and key " +
                         shape_string(key.value()) + " widths differ");
  }
  if (key.rows() != value.rows()) {
    throw DimensionError("attention: key " + shape_string(key.value()) + " and value " +
                         shape_string(value.value()) + " row counts differ");
  }
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(query.cols()));
  return matmul(softmax_rows(scale(matmul_nt(query, key), inv_sqrt)), value);
}

Var affine(Var x, Var weight, Var bias) { return add_row(matmul(x, weight), bias); }

Var mse(Var prediction, std::span<const double> target) {
  const Tensor2& p = prediction.value();
  if (p.cols() != 1 || p.rows() != target.size()) {
    throw DimensionError("mse: prediction " + shape_string(p) + " vs target length " +
                         std::to_string(target.size()));
  }
  if (target.empty()) throw DimensionError("mse: empty target");
  const double n = static_cast<double>(target.size());
  double total = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double d = p(i, 0) - target[i];
    total += d * d;
  }
  std::vector<double> tgt(target.begin(), target.end());
  const std::array inputs{prediction};
  return prediction.tape().record(
      Tensor2(1, 1, total / n), inputs,
      [prediction, tgt = std::move(tgt), n](Tape& t, std::size_t self) {
        const double g = t.grad(self)(0, 0);
        const Tensor2& pv = prediction.value();
        Tensor2 gp(pv.rows(), 1);
        for (std::size_t i = 0; i < tgt.size(); ++i) gp(i, 0) = 2.0 * g * (pv(i, 0) - tgt[i]) / n;
        accumulate(t, prediction, gp);
      });
}

}  // namespace mfst::ad
