// SPDX-License-Identifier: Apache-2.0
#include "sembert/num/optim.hpp"

#include <cmath>

#include "sembert/error.hpp"

namespace sembert::num {

Adam::Adam(ParamList params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  for (const auto& p : params_) {
    m_.emplace_back(p.tensor.size(), 0.0);
    v_.emplace_back(p.tensor.size(), 0.0);
  }
}

void Adam::step(double learning_rate) {
  ++t_;
  const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    auto& p = params_[k];
    if (!p.tensor.has_grad()) continue;
    auto w = p.tensor.data();
    auto g = p.tensor.grad();
    auto& m = m_[k];
    auto& v = v_[k];
    const double decay = p.decay ? options_.weight_decay : 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = options_.beta1 * m[i] + (1.0 - options_.beta1) * g[i];
      v[i] = options_.beta2 * v[i] + (1.0 - options_.beta2) * g[i] * g[i];
      const double update = (m[i] / c1) / (std::sqrt(v[i] / c2) + options_.eps);
      w[i] -= learning_rate * (update + decay * w[i]);
    }
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.tensor.zero_grad();
}

WarmupLinearSchedule::WarmupLinearSchedule(double peak, std::size_t total_steps,
                                           double warmup_fraction)
    : peak_(peak), total_(total_steps) {
  if (warmup_fraction < 0.0 || warmup_fraction > 1.0) {
    throw RangeError("warm-up fraction must lie in [0, 1]");
  }
  warmup_ = static_cast<std::size_t>(std::llround(warmup_fraction * static_cast<double>(total_)));
}

double WarmupLinearSchedule::at(std::size_t step) const {
  if (total_ == 0) return peak_;
  if (step < warmup_) return peak_ * static_cast<double>(step + 1) / static_cast<double>(warmup_);
  if (step >= total_) return 0.0;
  const double remaining = static_cast<double>(total_ - step);
  const double span = static_cast<double>(total_ - warmup_);
  return peak_ * remaining / span;
}

}  // namespace sembert::num
