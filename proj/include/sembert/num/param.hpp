// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "sembert/num/rng.hpp"
#include "sembert/num/tensor.hpp"

namespace sembert::num {

struct NamedParam {
  std::string name;
  Tensor tensor;
  // Weight decay applies to matrices only; biases and layer-norm terms opt out.
  bool decay = true;
};

using ParamList = std::vector<NamedParam>;

// Xavier-uniform matrix, bounds +-sqrt(6 / (rows + cols)).
Tensor xavier_uniform(std::size_t rows, std::size_t cols, Rng& rng);
Tensor uniform_table(std::size_t rows, std::size_t cols, double bound, Rng& rng);
Tensor zero_param(Shape shape);
Tensor one_param(Shape shape);

void zero_grads(ParamList& params);
// Deep copy of the parameter values, for snapshots of the best model.
std::vector<std::vector<double>> snapshot(const ParamList& params);
void restore(ParamList& params, const std::vector<std::vector<double>>& values);

}  // namespace sembert::num
