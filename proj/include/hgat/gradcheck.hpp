#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hgat/autograd.hpp"

namespace hgat {

// Builds a scalar loss on the given tape from leaf Vars bound to `inputs`
// (in the same order).
using LossBuilder =
    std::function<Tape::Var(Tape&, const std::vector<Tape::Var>&)>;

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_input;   // parameter name of the worst entry
  std::size_t worst_entry = 0;
  double analytic = 0.0;     // taped gradient at the worst entry
  double numeric = 0.0;      // finite-difference gradient at the worst entry
};

// Compares taped gradients against central finite differences over every
// entry of every input. Relative error uses max(|a|, |b|, 1e-3) as the
// denominator so that finite-difference roundoff on near-zero gradients does
// not dominate. Returns the maximum relative error.
GradCheckReport grad_check(const LossBuilder& build, std::vector<Parameter*> inputs,
                           double fd_step = 1e-5);

}  // namespace hgat
