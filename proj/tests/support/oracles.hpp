// SPDX-License-Identifier: Apache-2.0
// Independent reference computations used only by tests. Nothing here calls
// into the library's numerical paths.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace sembert::testing {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Scalar GRU (d_in = h = 1). Gates ordered (z, r, n) as in the library.
struct ScalarGru {
  double wx[3];
  double wh[3];
  double b[3];

  std::vector<double> run(const std::vector<double>& xs) const {
    double h = 0.0;
    std::vector<double> out;
    for (double x : xs) {
      const double z = logistic(wx[0] * x + b[0] + wh[0] * h);
      const double r = logistic(wx[1] * x + b[1] + wh[1] * h);
      const double n = std::tanh(wx[2] * x + b[2] + wh[2] * (r * h));
      h = (1 - z) * n + z * h;
      out.push_back(h);
    }
    return out;
  }
};

// Exhaustive search over all label sequences of length n, keeping the
// highest total score among those accepted by `legal`.
inline std::vector<int> brute_force_best_path(
    const std::vector<std::vector<double>>& scores, int num_labels,
    const std::function<bool(const std::vector<int>&)>& legal) {
  const std::size_t n = scores.size();
  std::vector<int> path(n, 0), best;
  double best_score = -std::numeric_limits<double>::infinity();
  while (true) {
    if (legal(path)) {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) s += scores[i][static_cast<std::size_t>(path[i])];
      if (s > best_score) {
        best_score = s;
        best = path;
      }
    }
    std::size_t k = 0;
    while (k < n && ++path[k] == num_labels) path[k++] = 0;
    if (k == n) break;
  }
  return best;
}

struct BruteSpan {
  bool is_null = true;
  std::size_t start = 0, end = 0;
  double best = 0, null_score = 0;
};

// Null rule by enumeration: softmax over {0} u candidates, then every
// (i, j) pair with i <= j, j - i < max_len over candidate positions.
inline BruteSpan brute_force_span(const std::vector<double>& start, const std::vector<double>& end,
                                  const std::vector<int>& candidates, double tau,
                                  std::size_t max_len) {
  const std::size_t n = start.size();
  auto softmax = [&](const std::vector<double>& v) {
    std::vector<double> p(n, 0.0);
    double z = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (i == 0 || candidates[i]) z += std::exp(v[i]);
    for (std::size_t i = 0; i < n; ++i)
      if (i == 0 || candidates[i]) p[i] = std::exp(v[i]) / z;
    return p;
  };
  const auto s = softmax(start), e = softmax(end);
  BruteSpan out;
  out.null_score = s[0] + e[0];
  out.best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) {
      if (!candidates[i] || !candidates[j] || j < i || j - i >= max_len) continue;
      if (s[i] + e[j] > out.best) {
        out.best = s[i] + e[j];
        out.start = i;
        out.end = j;
      }
    }
  out.is_null = !(out.best > out.null_score + tau);
  if (out.is_null) out.start = out.end = 0;
  return out;
}

}  // namespace sembert::testing
