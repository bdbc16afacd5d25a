#include "hgat/gradcheck.hpp"

#include <cmath>

namespace hgat {

namespace {

double eval_loss(const LossBuilder& build, const std::vector<Parameter*>& inputs) {
  Tape tape;
  std::vector<Tape::Var> vars;
  vars.reserve(inputs.size());
  for (Parameter* p : inputs) vars.push_back(tape.parameter(*p));
  Tape::Var loss = build(tape, vars);
  return tape.value(loss).item();
}

}  // namespace

GradCheckReport grad_check(const LossBuilder& build, std::vector<Parameter*> inputs,
                           double fd_step) {
  // Analytic pass.
  std::vector<Tensor> analytic;
  {
    for (Parameter* p : inputs) p->zero_grad();
    Tape tape;
    std::vector<Tape::Var> vars;
    vars.reserve(inputs.size());
    for (Parameter* p : inputs) vars.push_back(tape.parameter(*p));
    Tape::Var loss = build(tape, vars);
    tape.backward(loss);
    for (Parameter* p : inputs) analytic.push_back(p->gradient);
  }

  GradCheckReport report;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    Parameter& p = *inputs[k];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value[i];
      p.value[i] = saved + fd_step;
      double up = eval_loss(build, inputs);
      p.value[i] = saved - fd_step;
      double down = eval_loss(build, inputs);
      p.value[i] = saved;
      double numeric = (up - down) / (2.0 * fd_step);
      double a = analytic[k][i];
      double denom = std::max({std::fabs(a), std::fabs(numeric), 1e-3});
      double rel = std::fabs(a - numeric) / denom;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_input = p.name;
        report.worst_entry = i;
        report.analytic = a;
        report.numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace hgat
