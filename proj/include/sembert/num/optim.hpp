// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "sembert/num/param.hpp"

namespace sembert::num {

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Decoupled L2 decay, applied only to parameters flagged `decay`.
  double weight_decay = 0.01;
};

class Adam {
 public:
  Adam(ParamList params, AdamOptions options = {});

  // Applies one update with the current gradients, then leaves them intact.
  void step(double learning_rate);
  void zero_grad();
  std::size_t steps() const { return t_; }
  const ParamList& params() const { return params_; }

 private:
  ParamList params_;
  AdamOptions options_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::size_t t_ = 0;
};

// Linear warm-up from 0 to `peak` over the first warmup_fraction of the
// steps, then linear decay to 0 at `total_steps`.
class WarmupLinearSchedule {
 public:
  WarmupLinearSchedule(double peak, std::size_t total_steps, double warmup_fraction);
  double at(std::size_t step) const;

 private:
  double peak_;
  std::size_t total_;
  std::size_t warmup_;
};

}  // namespace sembert::num
