// SPDX-License-Identifier: Apache-2.0
#include "sembert/num/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sembert/error.hpp"

namespace sembert::num {

using detail::make_result;
using detail::Node;
using detail::parent_grad;

namespace {

thread_local KinkScope* active_scope = nullptr;

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
  }
}

Shape matrix_shape(std::size_t r, std::size_t c) { return {r, c}; }

// Elementwise unary op given f(x) and f'(x) expressed through (x, y).
template <typename F, typename DF>
Tensor unary(const Tensor& a, F f, DF df) {
  auto x = a.values();
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  return make_result(a.shape(), std::move(y), {a}, [df](Node& self) {
    double* ga = parent_grad(self, 0);
    if (!ga) return;
    const auto& x = self.parents[0]->value;
    for (std::size_t i = 0; i < x.size(); ++i) ga[i] += self.grad[i] * df(x[i], self.value[i]);
  });
}

}  // namespace

KinkScope::KinkScope() : previous_(active_scope) { active_scope = this; }
KinkScope::~KinkScope() { active_scope = previous_; }

void note_branch(std::uint64_t decision) {
  if (!active_scope) return;
  auto& s = active_scope->signature_;
  s ^= decision + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
  s *= 1099511628211ULL;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  if (b.rows() != k) {
    throw DimensionError("matmul: inner dimensions differ, " + shape_str(a.shape()) + " x " +
                         shape_str(b.shape()));
  }
  auto av = a.values();
  auto bv = b.values();
  std::vector<double> out(n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* orow = out.data() + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = av[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = bv.data() + p * m;
      for (std::size_t j = 0; j < m; ++j) orow[j] += aip * brow[j];
    }
  }
  return make_result(matrix_shape(n, m), std::move(out), {a, b}, [n, k, m](Node& self) {
    const auto& av = self.parents[0]->value;
    const auto& bv = self.parents[1]->value;
    const auto& g = self.grad;
    if (double* ga = parent_grad(self, 0)) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          double s = 0.0;
          for (std::size_t j = 0; j < m; ++j) s += g[i * m + j] * bv[p * m + j];
          ga[i * k + p] += s;
        }
    }
    if (double* gb = parent_grad(self, 1)) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double aip = av[i * k + p];
          if (aip == 0.0) continue;
          for (std::size_t j = 0; j < m; ++j) gb[p * m + j] += aip * g[i * m + j];
        }
    }
  });
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  if (x.cols() != w.rows() || b.size() != w.cols() || b.rows() != 1) {
    throw DimensionError("linear: x " + shape_str(x.shape()) + ", W " + shape_str(w.shape()) +
                         ", b " + shape_str(b.shape()));
  }
  Tensor xw = matmul(x, w);
  const std::size_t n = xw.rows(), m = xw.cols();
  std::vector<double> out(xw.values().begin(), xw.values().end());
  auto bv = b.values();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) out[i * m + j] += bv[j];
  return make_result(matrix_shape(n, m), std::move(out), {xw, b}, [n, m](Node& self) {
    if (double* g0 = parent_grad(self, 0))
      for (std::size_t i = 0; i < n * m; ++i) g0[i] += self.grad[i];
    if (double* gb = parent_grad(self, 1))
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) gb[j] += self.grad[i * m + j];
  });
}

Tensor transpose(const Tensor& a) {
  const std::size_t n = a.rows(), m = a.cols();
  auto av = a.values();
  std::vector<double> out(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) out[j * n + i] = av[i * m + j];
  return make_result(matrix_shape(m, n), std::move(out), {a}, [n, m](Node& self) {
    if (double* ga = parent_grad(self, 0))
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) ga[i * m + j] += self.grad[j * n + i];
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  auto av = a.values();
  auto bv = b.values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[i];
  return make_result(a.shape(), std::move(out), {a, b}, [](Node& self) {
    for (std::size_t p = 0; p < 2; ++p)
      if (double* g = parent_grad(self, p))
        for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += self.grad[i];
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  auto av = a.values();
  auto bv = b.values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] - bv[i];
  return make_result(a.shape(), std::move(out), {a, b}, [](Node& self) {
    if (double* g = parent_grad(self, 0))
      for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += self.grad[i];
    if (double* g = parent_grad(self, 1))
      for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] -= self.grad[i];
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  auto av = a.values();
  auto bv = b.values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
  return make_result(a.shape(), std::move(out), {a, b}, [](Node& self) {
    const auto& av = self.parents[0]->value;
    const auto& bv = self.parents[1]->value;
    if (double* g = parent_grad(self, 0))
      for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += self.grad[i] * bv[i];
    if (double* g = parent_grad(self, 1))
      for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += self.grad[i] * av[i];
  });
}

Tensor affine(const Tensor& a, double alpha, double beta) {
  return unary(
      a, [alpha, beta](double x) { return alpha * x + beta; },
      [alpha](double, double) { return alpha; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(
      a,
      [](double x) {
        if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& a) {
  return unary(
      a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Tensor relu(const Tensor& a) {
  if (active_scope) {
    for (double x : a.values()) note_branch(x > 0.0 ? 1 : 0);
  }
  return unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor gelu(const Tensor& a) {
  constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  constexpr double inv_sqrt_2pi = std::numbers::inv_sqrtpi * inv_sqrt2;
  return unary(
      a, [](double x) { return 0.5 * x * (1.0 + std::erf(x * inv_sqrt2)); },
      [](double x, double) {
        const double cdf = 0.5 * (1.0 + std::erf(x * inv_sqrt2));
        return cdf + x * inv_sqrt_2pi * std::exp(-0.5 * x * x);
      });
}

Tensor sum(const Tensor& a) {
  double s = 0.0;
  for (double x : a.values()) s += x;
  return make_result({1}, {s}, {a}, [](Node& self) {
    if (double* g = parent_grad(self, 0))
      for (std::size_t i = 0; i < self.parents[0]->value.size(); ++i) g[i] += self.grad[0];
  });
}

Tensor mean(const Tensor& a) {
  if (a.size() == 0) throw PreconditionError("mean of an empty tensor");
  return affine(sum(a), 1.0 / static_cast<double>(a.size()));
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw PreconditionError("concat_cols: no inputs");
  const std::size_t n = parts[0].rows();
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (p.rows() != n) {
      throw DimensionError("concat_cols: row counts differ, " + shape_str(parts[0].shape()) +
                           " vs " + shape_str(p.shape()));
    }
    widths.push_back(p.cols());
    total += p.cols();
  }
  std::vector<double> out(n * total);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    auto v = parts[k].values();
    for (std::size_t i = 0; i < n; ++i)
      std::copy_n(v.begin() + i * widths[k], widths[k], out.begin() + i * total + offset);
    offset += widths[k];
  }
  return make_result(matrix_shape(n, total), std::move(out), parts,
                     [n, total, widths](Node& self) {
                       std::size_t offset = 0;
                       for (std::size_t k = 0; k < widths.size(); ++k) {
                         if (double* g = parent_grad(self, k))
                           for (std::size_t i = 0; i < n; ++i)
                             for (std::size_t j = 0; j < widths[k]; ++j)
                               g[i * widths[k] + j] += self.grad[i * total + offset + j];
                         offset += widths[k];
                       }
                     });
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw PreconditionError("concat_rows: no inputs");
  const std::size_t m = parts[0].cols();
  std::vector<std::size_t> sizes;
  std::size_t rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != m) {
      throw DimensionError("concat_rows: column counts differ, " +
                           shape_str(parts[0].shape()) + " vs " + shape_str(p.shape()));
    }
    sizes.push_back(p.size());
    rows += p.rows();
  }
  std::vector<double> out;
  out.reserve(rows * m);
  for (const auto& p : parts) out.insert(out.end(), p.values().begin(), p.values().end());
  return make_result(matrix_shape(rows, m), std::move(out), parts, [sizes](Node& self) {
    std::size_t offset = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      if (double* g = parent_grad(self, k))
        for (std::size_t i = 0; i < sizes[k]; ++i) g[i] += self.grad[offset + i];
      offset += sizes[k];
    }
  });
}

Tensor slice_rows(const Tensor& a, std::size_t start, std::size_t count) {
  const std::size_t m = a.cols();
  if (start + count > a.rows()) {
    throw IndexError("slice_rows [" + std::to_string(start) + ", " +
                     std::to_string(start + count) + ") out of range for " +
                     shape_str(a.shape()));
  }
  auto v = a.values();
  std::vector<double> out(v.begin() + start * m, v.begin() + (start + count) * m);
  return make_result(matrix_shape(count, m), std::move(out), {a}, [start, m](Node& self) {
    if (double* g = parent_grad(self, 0))
      for (std::size_t i = 0; i < self.grad.size(); ++i) g[start * m + i] += self.grad[i];
  });
}

Tensor slice_cols(const Tensor& a, std::size_t start, std::size_t count) {
  const std::size_t n = a.rows(), m = a.cols();
  if (start + count > m) {
    throw IndexError("slice_cols [" + std::to_string(start) + ", " +
                     std::to_string(start + count) + ") out of range for " +
                     shape_str(a.shape()));
  }
  auto v = a.values();
  std::vector<double> out(n * count);
  for (std::size_t i = 0; i < n; ++i)
    std::copy_n(v.begin() + i * m + start, count, out.begin() + i * count);
  return make_result(matrix_shape(n, count), std::move(out), {a},
                     [n, m, start, count](Node& self) {
                       if (double* g = parent_grad(self, 0))
                         for (std::size_t i = 0; i < n; ++i)
                           for (std::size_t j = 0; j < count; ++j)
                             g[i * m + start + j] += self.grad[i * count + j];
                     });
}

Tensor pad_rows(const Tensor& a, std::size_t total) {
  const std::size_t n = a.rows(), m = a.cols();
  if (total <= n) return a;
  std::vector<double> out(total * m, 0.0);
  std::copy(a.values().begin(), a.values().end(), out.begin());
  return make_result(matrix_shape(total, m), std::move(out), {a}, [n, m](Node& self) {
    if (double* g = parent_grad(self, 0))
      for (std::size_t i = 0; i < n * m; ++i) g[i] += self.grad[i];
  });
}

Tensor unfold_windows(const Tensor& seq, std::size_t k) {
  const std::size_t l = seq.rows(), a = seq.cols();
  if (k < 1 || l < k) {
    throw PreconditionError("unfold_windows: need l >= k >= 1, got l=" + std::to_string(l) +
                            ", k=" + std::to_string(k));
  }
  const std::size_t positions = l - k + 1;
  auto v = seq.values();
  std::vector<double> out(positions * k * a);
  for (std::size_t i = 0; i < positions; ++i)
    std::copy_n(v.begin() + i * a, k * a, out.begin() + i * k * a);
  return make_result(matrix_shape(positions, k * a), std::move(out), {seq},
                     [positions, k, a](Node& self) {
                       if (double* g = parent_grad(self, 0))
                         for (std::size_t i = 0; i < positions; ++i)
                           for (std::size_t j = 0; j < k * a; ++j)
                             g[i * a + j] += self.grad[i * k * a + j];
                     });
}

Tensor conv1d_valid(const Tensor& seq, const Tensor& w, const Tensor& b, std::size_t k) {
  if (k < 1 || seq.rows() < k) {
    throw PreconditionError("conv1d_valid: sequence length " + std::to_string(seq.rows()) +
                            " shorter than window " + std::to_string(k) +
                            " (pad before calling)");
  }
  if (w.rows() != k * seq.cols()) {
    throw DimensionError("conv1d_valid: W " + shape_str(w.shape()) + " does not match window " +
                         std::to_string(k) + " over seq " + shape_str(seq.shape()));
  }
  return linear(unfold_windows(seq, k), w, b);
}

Tensor relu_maxpool(const Tensor& seq) {
  const std::size_t p = seq.rows(), m = seq.cols();
  if (p == 0 || seq.size() == 0) throw PreconditionError("relu_maxpool: empty sequence");
  auto v = seq.values();
  std::vector<double> out(m, 0.0);
  // argmax row per column, or p when the ReLU clamps the column to zero.
  std::vector<std::size_t> arg(m, p);
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < p; ++i)
      if (v[i * m + j] > v[best * m + j]) best = i;
    if (v[best * m + j] > 0.0) {
      out[j] = v[best * m + j];
      arg[j] = best;
    }
    if (active_scope) {
      // Ties change the routing too, so the whole ordering of the column's
      // maximum counts as part of the branch.
      std::uint64_t ties = 0;
      for (std::size_t i = 0; i < p; ++i)
        if (v[i * m + j] == v[best * m + j]) ++ties;
      note_branch((static_cast<std::uint64_t>(arg[j]) << 32) ^ ties);
    }
  }
  return make_result({m}, std::move(out), {seq}, [arg, p, m](Node& self) {
    if (double* g = parent_grad(self, 0))
      for (std::size_t j = 0; j < m; ++j)
        if (arg[j] < p) g[arg[j] * m + j] += self.grad[j];
  });
}

Tensor embedding_lookup(const Tensor& table, std::span<const int> ids) {
  const std::size_t vocab = table.rows(), d = table.cols();
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= vocab) {
      throw IndexError("embedding_lookup: id " + std::to_string(id) + " outside table of " +
                       std::to_string(vocab) + " rows");
    }
  }
  auto v = table.values();
  std::vector<double> out(ids.size() * d);
  for (std::size_t i = 0; i < ids.size(); ++i)
    std::copy_n(v.begin() + static_cast<std::size_t>(ids[i]) * d, d, out.begin() + i * d);
  std::vector<int> idv(ids.begin(), ids.end());
  return make_result(matrix_shape(ids.size(), d), std::move(out), {table},
                     [idv = std::move(idv), d](Node& self) {
                       if (double* g = parent_grad(self, 0))
                         for (std::size_t i = 0; i < idv.size(); ++i)
                           for (std::size_t j = 0; j < d; ++j)
                             g[static_cast<std::size_t>(idv[i]) * d + j] += self.grad[i * d + j];
                     });
}

Tensor masked_softmax_rows(const Tensor& scores, std::span<const int> key_mask) {
  const std::size_t n = scores.rows(), m = scores.cols();
  if (key_mask.size() != m) {
    throw DimensionError("masked_softmax_rows: mask of length " +
                         std::to_string(key_mask.size()) + " for scores " +
                         shape_str(scores.shape()));
  }
  if (std::none_of(key_mask.begin(), key_mask.end(), [](int k) { return k != 0; })) {
    throw PreconditionError("masked_softmax_rows: every column is masked");
  }
  auto v = scores.values();
  std::vector<double> out(n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j)
      if (key_mask[j]) mx = std::max(mx, v[i * m + j]);
    double z = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (key_mask[j]) z += (out[i * m + j] = std::exp(v[i * m + j] - mx));
    for (std::size_t j = 0; j < m; ++j) out[i * m + j] /= z;
  }
  return make_result(scores.shape(), std::move(out), {scores}, [n, m](Node& self) {
    double* g = parent_grad(self, 0);
    if (!g) return;
    const auto& y = self.value;
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < m; ++j) dot += self.grad[i * m + j] * y[i * m + j];
      for (std::size_t j = 0; j < m; ++j)
        g[i * m + j] += y[i * m + j] * (self.grad[i * m + j] - dot);
    }
  });
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps) {
  const std::size_t n = x.rows(), m = x.cols();
  if (gamma.size() != m || beta.size() != m) {
    throw DimensionError("layer_norm: x " + shape_str(x.shape()) + ", gamma " +
                         shape_str(gamma.shape()) + ", beta " + shape_str(beta.shape()));
  }
  auto v = x.values();
  auto gv = gamma.values();
  auto bv = beta.values();
  std::vector<double> xhat(n * m), inv(n), out(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    double mu = 0.0;
    for (std::size_t j = 0; j < m; ++j) mu += v[i * m + j];
    mu /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t j = 0; j < m; ++j) var += (v[i * m + j] - mu) * (v[i * m + j] - mu);
    var /= static_cast<double>(m);
    inv[i] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < m; ++j) {
      xhat[i * m + j] = (v[i * m + j] - mu) * inv[i];
      out[i * m + j] = gv[j] * xhat[i * m + j] + bv[j];
    }
  }
  return make_result(x.shape(), std::move(out), {x, gamma, beta},
                     [n, m, xhat = std::move(xhat), inv = std::move(inv)](Node& self) {
                       const auto& gv = self.parents[1]->value;
                       const auto& dy = self.grad;
                       if (double* gx = parent_grad(self, 0)) {
                         const double mm = static_cast<double>(m);
                         for (std::size_t i = 0; i < n; ++i) {
                           double s1 = 0.0, s2 = 0.0;
                           for (std::size_t j = 0; j < m; ++j) {
                             const double d = dy[i * m + j] * gv[j];
                             s1 += d;
                             s2 += d * xhat[i * m + j];
                           }
                           for (std::size_t j = 0; j < m; ++j) {
                             const double d = dy[i * m + j] * gv[j];
                             gx[i * m + j] += inv[i] / mm * (mm * d - s1 - xhat[i * m + j] * s2);
                           }
                         }
                       }
                       if (double* gg = parent_grad(self, 1))
                         for (std::size_t i = 0; i < n; ++i)
                           for (std::size_t j = 0; j < m; ++j)
                             gg[j] += dy[i * m + j] * xhat[i * m + j];
                       if (double* gb = parent_grad(self, 2))
                         for (std::size_t i = 0; i < n; ++i)
                           for (std::size_t j = 0; j < m; ++j) gb[j] += dy[i * m + j];
                     });
}

Tensor cross_entropy(const Tensor& logits, std::span<const int> targets,
                     std::span<const int> allowed) {
  const std::size_t n = logits.rows(), c = logits.cols();
  if (targets.size() != n) {
    throw DimensionError("cross_entropy: " + std::to_string(targets.size()) +
                         " targets for logits " + shape_str(logits.shape()));
  }
  if (!allowed.empty() && allowed.size() != c) {
    throw DimensionError("cross_entropy: allowed mask of length " +
                         std::to_string(allowed.size()) + " for " + std::to_string(c) +
                         " classes");
  }
  auto ok = [&](std::size_t j) { return allowed.empty() || allowed[j] != 0; };
  for (int t : targets) {
    if (t < 0 || static_cast<std::size_t>(t) >= c || !ok(static_cast<std::size_t>(t))) {
      throw IndexError("cross_entropy: target " + std::to_string(t) + " invalid for " +
                       std::to_string(c) + " classes");
    }
  }
  auto v = logits.values();
  std::vector<double> prob(n * c, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < c; ++j)
      if (ok(j)) mx = std::max(mx, v[i * c + j]);
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j)
      if (ok(j)) z += std::exp(v[i * c + j] - mx);
    const double log_z = mx + std::log(z);
    for (std::size_t j = 0; j < c; ++j)
      if (ok(j)) prob[i * c + j] = std::exp(v[i * c + j] - log_z);
    loss += log_z - v[i * c + static_cast<std::size_t>(targets[i])];
  }
  loss /= static_cast<double>(n);
  std::vector<int> tv(targets.begin(), targets.end());
  return make_result({1}, {loss}, {logits},
                     [n, c, prob = std::move(prob), tv = std::move(tv)](Node& self) {
                       double* g = parent_grad(self, 0);
                       if (!g) return;
                       const double scale = self.grad[0] / static_cast<double>(n);
                       for (std::size_t i = 0; i < n; ++i) {
                         for (std::size_t j = 0; j < c; ++j) g[i * c + j] += scale * prob[i * c + j];
                         g[i * c + static_cast<std::size_t>(tv[i])] -= scale;
                       }
                     });
}

Tensor mse(const Tensor& pred, std::span<const double> targets) {
  if (pred.size() != targets.size()) {
    throw DimensionError("mse: prediction " + shape_str(pred.shape()) + " vs " +
                         std::to_string(targets.size()) + " targets");
  }
  if (targets.empty()) throw PreconditionError("mse: no targets");
  auto v = pred.values();
  double loss = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) loss += (v[i] - targets[i]) * (v[i] - targets[i]);
  loss /= static_cast<double>(v.size());
  std::vector<double> tv(targets.begin(), targets.end());
  return make_result({1}, {loss}, {pred}, [tv = std::move(tv)](Node& self) {
    double* g = parent_grad(self, 0);
    if (!g) return;
    const auto& v = self.parents[0]->value;
    const double scale = 2.0 * self.grad[0] / static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) g[i] += scale * (v[i] - tv[i]);
  });
}

}  // namespace sembert::num
