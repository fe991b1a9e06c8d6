// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sembert/num/tensor.hpp"

namespace sembert::num {

struct GradCheckOptions {
  double eps = 1e-5;
  // Coordinates checked; all of them when the parameters have fewer.
  std::size_t max_coords = 256;
  std::uint64_t seed = 0;
  // Lower bound on the relative-error denominator. Exactly-zero gradients
  // (a key bias under softmax, for one) leave only round-off in the
  // numeric estimate, which this keeps from reading as a large error.
  double denominator_floor = 1e-6;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  // Coordinates whose +-eps perturbation crossed a ReLU or max-pool kink.
  std::size_t skipped = 0;
  std::string worst;
};

// Compares reverse-mode gradients of the scalar `loss()` against central
// differences (f(x+eps) - f(x-eps)) / (2 eps) on a sampled subset of the
// coordinates of `params`. The relative error of one coordinate is
// |analytic - numeric| / max(floor, |analytic| + |numeric|).
GradCheckResult grad_check(const std::function<Tensor()>& loss, std::vector<Tensor> params,
                           const GradCheckOptions& options = {});

}  // namespace sembert::num
