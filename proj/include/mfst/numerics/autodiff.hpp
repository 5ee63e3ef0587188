#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <deque>
#include <unordered_map>
#include <vector>

#include "mfst/numerics/parameter.hpp"
#include "mfst/numerics/tensor.hpp"

namespace mfst::ad {

class Tape;

/// Handle to a node on a Tape. Cheap to copy; only valid while its tape lives.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t index) : tape_(tape), index_(index) {}

  const Tensor2& value() const;
  Tape& tape() const { return *tape_; }
  std::size_t index() const { return index_; }
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

 private:
  Tape* tape_ = nullptr;
  std::size_t index_ = 0;
};

/// Reverse-mode recording of a computation over Tensor2 values.
///
/// Each op appends a node holding its forward value and a closure that pushes
/// the node's gradient into its inputs. backward() walks nodes in reverse
/// insertion order, which is a valid topological order since inputs always
/// precede outputs. Gradients reaching parameter leaves are added to
/// Parameter::grad, so several tapes can accumulate into the same parameters.
///
/// A tape built with `record = false` treats parameters as constants and keeps
/// no closures; use it for inference.
class Tape {
 public:
  using Backward = std::function<void(Tape&, std::size_t self)>;

  explicit Tape(bool record = true) : record_(record) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return record_; }

  Var constant(Tensor2 value);
  /// Leaf bound to `param`. Repeated calls for the same parameter return the
  /// same node.
  Var parameter(Parameter& param);

  /// Runs reverse accumulation from a 1x1 output, seeding it with `seed`.
  void backward(Var output, double seed = 1.0);

  const Tensor2& value(std::size_t index) const { return nodes_[index].value; }
  bool requires_grad(std::size_t index) const { return nodes_[index].requires_grad; }
  /// Gradient buffer of a node; valid during and after backward().
  Tensor2& grad(std::size_t index) { return nodes_[index].grad; }

  /// Appends an op result. `inputs` decide whether the node needs a gradient;
  /// `backward` is dropped when none of them do. Throws NumericError when the
  /// value has a non-finite entry.
  Var record(Tensor2 value, std::span<const Var> inputs, Backward backward);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor2 value;
    Tensor2 grad;
    Backward backward;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };

  bool record_;
  // deque: value() references stay valid while the tape grows.
  std::deque<Node> nodes_;
  std::unordered_map<const Parameter*, std::size_t> param_nodes_;
};

// Differentiable ops. All inputs must live on the same tape.

Var matmul(Var a, Var b);
/// a * b^T
Var matmul_nt(Var a, Var b);
Var add(Var a, Var b);
/// x + row broadcast over rows; `row` is 1xC.
Var add_row(Var x, Var row);
Var scale(Var x, double factor);
Var relu(Var x);
Var sigmoid(Var x);
Var softmax_rows(Var x);
Var layer_norm(Var x, Var gain, Var bias);
Var concat_cols(std::span<const Var> parts);
Var slice_cols(Var x, std::size_t begin, std::size_t count);
/// softmax(q k^T / sqrt(q.cols)) v
Var attention(Var query, Var key, Var value);
/// Affine map x W + b, with b broadcast over rows.
Var affine(Var x, Var weight, Var bias);
/// Mean squared error between an Nx1 prediction and a length-N target; 1x1.
Var mse(Var prediction, std::span<const double> target);

}  // namespace mfst::ad
