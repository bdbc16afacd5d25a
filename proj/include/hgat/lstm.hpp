#pragma once

#include <vector>

#include "hgat/autograd.hpp"
#include "hgat/rng.hpp"

namespace hgat {

// Gate weights are u x (u + d) acting on the concatenation [h, x]; biases are
// u-vectors. Weights start uniform(-1/sqrt(u), 1/sqrt(u)), biases at zero.
struct LstmParams {
  std::size_t hidden = 0;  // u
  std::size_t input = 0;   // d
  Parameter w_forget, w_input, w_cell, w_output;
  Parameter b_forget, b_input, b_cell, b_output;

  LstmParams(std::size_t u, std::size_t d, Rng rng);
  std::vector<Parameter*> parameters();
  // Throws DimensionError naming the offending gate.
  void check_shapes() const;
};

// Per-tape leaf bindings for the eight gate parameters.
struct LstmVars {
  Tape::Var w_forget, w_input, w_cell, w_output;
  Tape::Var b_forget, b_input, b_cell, b_output;
};

LstmVars bind_lstm(Tape& tape, LstmParams& params);

struct LstmStateVar {
  Tape::Var h;  // N x u
  Tape::Var c;  // N x u
};

// One cell step for a batch of rows:
//   f = sig(W_f [h,x] + b_f), i = sig(...), c~ = tanh(...),
//   c' = f*c + i*c~, o = sig(...), h' = o * tanh(c').
LstmStateVar lstm_cell(Tape& tape, const LstmParams& params, const LstmVars& vars,
                       Tape::Var x, LstmStateVar state);

// Runs the cell over the S window positions of features (N x S x D) with
// zero initial state; returns the final hidden state (N x u).
Tape::Var sequence_embed(Tape& tape, const LstmParams& params, const LstmVars& vars,
                         const Tensor& features);

}  // namespace hgat
