#include "hgat/lstm.hpp"

#include <cmath>

namespace hgat {

namespace {

Tensor init_gate_weight(std::size_t u, std::size_t d, Rng& rng) {
  Tensor w({u, u + d});
  double bound = 1.0 / std::sqrt(static_cast<double>(u));
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng.uniform(-bound, bound);
  return w;
}

}  // namespace

LstmParams::LstmParams(std::size_t u, std::size_t d, Rng rng)
    : hidden(u),
      input(d),
      w_forget("lstm.w_forget", init_gate_weight(u, d, rng)),
      w_input("lstm.w_input", init_gate_weight(u, d, rng)),
      w_cell("lstm.w_cell", init_gate_weight(u, d, rng)),
      w_output("lstm.w_output", init_gate_weight(u, d, rng)),
      b_forget("lstm.b_forget", Tensor({u})),
      b_input("lstm.b_input", Tensor({u})),
      b_cell("lstm.b_cell", Tensor({u})),
      b_output("lstm.b_output", Tensor({u})) {
  if (u == 0 || d == 0) throw DimensionError("lstm: hidden and input sizes must be positive");
}

std::vector<Parameter*> LstmParams::parameters() {
  return {&w_forget, &w_input, &w_cell, &w_output,
          &b_forget, &b_input, &b_cell, &b_output};
}

void LstmParams::check_shapes() const {
  const std::vector<std::pair<const char*, const Parameter*>> gates{
      {"forget", &w_forget}, {"input", &w_input}, {"cell", &w_cell}, {"output", &w_output}};
  for (auto [name, w] : gates) {
    if (w->value.rank() != 2 || w->value.extent(0) != hidden ||
        w->value.extent(1) != hidden + input) {
      throw DimensionError(std::string("lstm ") + name + " gate: weight shape " +
                           w->value.shape_str() + " does not match u=" +
                           std::to_string(hidden) + ", d=" + std::to_string(input));
    }
  }
  const std::vector<std::pair<const char*, const Parameter*>> biases{
      {"forget", &b_forget}, {"input", &b_input}, {"cell", &b_cell}, {"output", &b_output}};
  for (auto [name, b] : biases) {
    if (b->value.rank() != 1 || b->value.extent(0) != hidden) {
      throw DimensionError(std::string("lstm ") + name + " gate: bias shape " +
                           b->value.shape_str() + " does not match u=" + std::to_string(hidden));
    }
  }
}

LstmVars bind_lstm(Tape& tape, LstmParams& params) {
  params.check_shapes();
  LstmVars v;
  v.w_forget = tape.parameter(params.w_forget);
  v.w_input = tape.parameter(params.w_input);
  v.w_cell = tape.parameter(params.w_cell);
  v.w_output = tape.parameter(params.w_output);
  v.b_forget = tape.parameter(params.b_forget);
  v.b_input = tape.parameter(params.b_input);
  v.b_cell = tape.parameter(params.b_cell);
  v.b_output = tape.parameter(params.b_output);
  return v;
}

LstmStateVar lstm_cell(Tape& tape, const LstmParams& params, const LstmVars& vars,
                       Tape::Var x, LstmStateVar state) {
  const Tensor& xv = tape.value(x);
  if (xv.rank() != 2 || xv.extent(1) != params.input) {
    throw DimensionError("lstm forget gate: input shape " + xv.shape_str() +
                         " does not match d=" + std::to_string(params.input));
  }
  Tape::Var hx = tape.concat_cols({state.h, x});
  Tape::Var f = tape.sigmoid(tape.linear(hx, vars.w_forget, vars.b_forget));
  Tape::Var i = tape.sigmoid(tape.linear(hx, vars.w_input, vars.b_input));
  Tape::Var c_cand = tape.tanh(tape.linear(hx, vars.w_cell, vars.b_cell));
  Tape::Var c_next = tape.add(tape.mul(f, state.c), tape.mul(i, c_cand));
  Tape::Var o = tape.sigmoid(tape.linear(hx, vars.w_output, vars.b_output));
  Tape::Var h_next = tape.mul(o, tape.tanh(c_next));
  return LstmStateVar{h_next, c_next};
}

Tape::Var sequence_embed(Tape& tape, const LstmParams& params, const LstmVars& vars,
                         const Tensor& features) {
  if (features.rank() != 3) {
    throw DimensionError("sequence_embed: expected N x S x D features, got " +
                         features.shape_str());
  }
  const std::size_t n = features.extent(0), steps = features.extent(1), d = features.extent(2);
  if (steps == 0) throw DimensionError("sequence_embed: window must have at least one step");

  LstmStateVar state{tape.constant(Tensor({n, params.hidden})),
                     tape.constant(Tensor({n, params.hidden}))};
  for (std::size_t s = 0; s < steps; ++s) {
    Tensor x({n, d});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < d; ++k) x.at(i, k) = features.at(i, s, k);
    }
    state = lstm_cell(tape, params, vars, tape.constant(std::move(x)), state);
  }
  return state.h;
}

}  // namespace hgat
