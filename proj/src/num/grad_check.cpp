// SPDX-License-Identifier: Apache-2.0
#include "sembert/num/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "sembert/error.hpp"
#include "sembert/num/ops.hpp"
#include "sembert/num/rng.hpp"

namespace sembert::num {

namespace {

std::pair<double, std::uint64_t> evaluate(const std::function<Tensor()>& loss) {
  KinkScope scope;
  Tensor out = loss();
  if (!out.defined() || out.size() != 1) {
    throw PreconditionError("grad_check: loss must be a scalar tensor");
  }
  return {out.item(), scope.signature()};
}

}  // namespace

GradCheckResult grad_check(const std::function<Tensor()>& loss, std::vector<Tensor> params,
                           const GradCheckOptions& options) {
  for (auto& p : params) {
    if (!p.requires_grad() || !p.is_leaf()) {
      throw PreconditionError("grad_check: parameters must be leaves that require grad");
    }
    p.zero_grad();
  }

  std::uint64_t base_signature = 0;
  {
    KinkScope scope;
    Tensor out = loss();
    if (!out.defined() || out.size() != 1) {
      throw PreconditionError("grad_check: loss must be a scalar tensor, got " +
                              (out.defined() ? shape_str(out.shape()) : std::string("none")));
    }
    base_signature = scope.signature();
    out.backward();
  }

  std::vector<std::pair<std::size_t, std::size_t>> coords;
  for (std::size_t p = 0; p < params.size(); ++p)
    for (std::size_t i = 0; i < params[p].size(); ++i) coords.emplace_back(p, i);
  if (coords.size() > options.max_coords) {
    Rng rng(options.seed);
    for (std::size_t i = 0; i < options.max_coords; ++i) {
      std::swap(coords[i], coords[i + rng.below(coords.size() - i)]);
    }
    coords.resize(options.max_coords);
  }

  GradCheckResult result;
  for (auto [p, i] : coords) {
    auto values = params[p].data();
    const double saved = values[i];
    values[i] = saved + options.eps;
    auto [plus, sig_plus] = evaluate(loss);
    values[i] = saved - options.eps;
    auto [minus, sig_minus] = evaluate(loss);
    values[i] = saved;
    if (sig_plus != base_signature || sig_minus != base_signature) {
      ++result.skipped;
      continue;
    }
    const double numeric = (plus - minus) / (2.0 * options.eps);
    const double analytic = params[p].grad()[i];
    const double err =
        std::abs(analytic - numeric) / std::max(options.denominator_floor, std::abs(analytic) + std::abs(numeric));
    ++result.checked;
    if (result.worst.empty() || err > result.max_rel_error) {
      result.max_rel_error = err;
      std::ostringstream os;
      os.precision(12);
      os << "param " << p << " coord " << i << ": analytic " << analytic << " numeric "
         << numeric;
      result.worst = os.str();
    }
  }
  return result;
}

}  // namespace sembert::num
