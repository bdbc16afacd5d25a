#pragma once

#include <cstdint>
#include <vector>

#include "hgat/autograd.hpp"

namespace hgat {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction, applied in place to a fixed parameter list.
// The moment buffers are keyed by list position, so the list must not change
// between steps.
class AdamState {
 public:
  AdamState(std::vector<Parameter*> params, AdamConfig config = {});

  // One update from the parameters' current gradients. Throws NumericError
  // naming the parameter if a gradient entry is not finite.
  void step();

  std::uint64_t step_count() const { return step_count_; }
  const AdamConfig& config() const { return config_; }
  const Tensor& first_moment(std::size_t param_index) const { return m_.at(param_index); }
  const Tensor& second_moment(std::size_t param_index) const { return v_.at(param_index); }

 private:
  std::vector<Parameter*> params_;
  AdamConfig config_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  std::uint64_t step_count_ = 0;
};

}  // namespace hgat
