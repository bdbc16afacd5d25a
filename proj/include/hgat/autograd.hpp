#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "hgat/tensor.hpp"

namespace hgat {

// Trainable value: a tensor plus a same-shaped gradient slot. Gradients are
// zeroed at the start of each optimizer step and accumulated by backward().
struct Parameter {
  Tensor value;
  Tensor gradient;
  std::string name;

  Parameter(std::string param_name, Tensor initial)
      : value(std::move(initial)),
        gradient(Tensor::zeros_like(value)),
        name(std::move(param_name)) {}

  void zero_grad() { gradient.fill(0.0); }
};

void zero_gradients(const std::vector<Parameter*>& params);

// Reverse-mode tape. Taping is opt-in: build a Tape for passes that need
// gradients, use hgat::ops directly otherwise. A Tape is single-owner and
// records operations in execution order; backward() replays them in exact
// reverse order and accumulates into bound Parameter gradients.
class Tape {
 public:
  struct Var {
    const Tape* owner = nullptr;
    std::size_t index = 0;
  };

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor v);
  Var parameter(Parameter& p);

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);  // elementwise
  Var scale(Var a, double c);
  Var mul_const(Var a, const Tensor& c);  // elementwise by a constant tensor
  Var matmul(Var a, Var b);
  // x (N*in) * w^T + row-broadcast bias; w is (out*in), b is (out).
  Var linear(Var x, Var w, Var b);
  Var sigmoid(Var a);
  Var tanh(Var a);
  Var softmax(Var a, std::size_t axis);
  Var sum(Var a);  // scalar
  // Horizontal concatenation of rank-2 nodes with equal row counts.
  Var concat_cols(const std::vector<Var>& parts);
  // out[r, :] = m[rows[r], :]
  Var gather_rows(Var m, std::vector<std::size_t> rows);
  // Softmax within each contiguous segment [offsets[s], offsets[s+1]) of a
  // flat vector; empty segments are legal.
  Var segment_softmax(Var v, std::vector<std::size_t> offsets);
  // out (out_rows * cols) with out[dst[p], :] += coeff[p] * values[src[p], :].
  Var scatter_rows_weighted(Var coeff, Var values, std::vector<std::size_t> src,
                            std::vector<std::size_t> dst, std::size_t out_rows);
  // Pairwise ranking hinge: sum_{i,j} max(0, -(p_i - p_j)(t_i - t_j)) over all
  // ordered pairs; subgradient at the kink is 0.
  Var rank_hinge(Var pred, Tensor target);

  // Seeds d(loss)/d(loss) = 1, replays the tape backward, then adds each
  // bound parameter's adjoint into Parameter::gradient (accumulating across
  // calls until the gradients are zeroed).
  void backward(Var loss);

  const Tensor& value(Var v) const;
  const Tensor& adjoint(Var v) const;
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor adjoint;
    Parameter* param = nullptr;
    std::function<void(Tape&, std::size_t)> backprop;
  };

  Var push(Tensor value, std::function<void(Tape&, std::size_t)> backprop,
           const char* op_name);
  std::size_t check(Var v, const char* op_name) const;
  Node& node(std::size_t i) { return nodes_[i]; }

  std::vector<Node> nodes_;
};

}  // namespace hgat
