// SPDX-License-Identifier: Apache-2.0
#include "sembert/num/param.hpp"

#include <algorithm>
#include <cmath>

#include "sembert/error.hpp"

namespace sembert::num {

Tensor xavier_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  return uniform_table(rows, cols, bound, rng);
}

Tensor uniform_table(std::size_t rows, std::size_t cols, double bound, Rng& rng) {
  std::vector<double> v(rows * cols);
  for (auto& x : v) x = rng.uniform(-bound, bound);
  return Tensor::from({rows, cols}, std::move(v), true);
}

Tensor zero_param(Shape shape) { return Tensor::zeros(std::move(shape), true); }
Tensor one_param(Shape shape) { return Tensor::full(std::move(shape), 1.0, true); }

void zero_grads(ParamList& params) {
  for (auto& p : params) p.tensor.zero_grad();
}

std::vector<std::vector<double>> snapshot(const ParamList& params) {
  std::vector<std::vector<double>> out;
  out.reserve(params.size());
  for (const auto& p : params) out.emplace_back(p.tensor.values().begin(), p.tensor.values().end());
  return out;
}

void restore(ParamList& params, const std::vector<std::vector<double>>& values) {
  if (values.size() != params.size()) throw DimensionError("restore: parameter count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto dst = params[i].tensor.data();
    if (dst.size() != values[i].size()) {
      throw DimensionError("restore: size mismatch for " + params[i].name);
    }
    std::copy(values[i].begin(), values[i].end(), dst.begin());
  }
}

}  // namespace sembert::num
