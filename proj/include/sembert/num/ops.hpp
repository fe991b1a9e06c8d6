// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sembert/num/tensor.hpp"

namespace sembert::num {

// Matrix ops treat a 1-D tensor of length k as a 1 x k row.

Tensor matmul(const Tensor& a, const Tensor& b);
// out[i,j] = sum_k x[i,k] * W[k,j] + b[j]
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);
Tensor transpose(const Tensor& a);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
// alpha * a + beta, elementwise.
Tensor affine(const Tensor& a, double alpha, double beta = 0.0);

Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor relu(const Tensor& a);
// Exact (erf-based) GELU.
Tensor gelu(const Tensor& a);

Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);

Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor concat_rows(const std::vector<Tensor>& parts);
Tensor slice_rows(const Tensor& a, std::size_t start, std::size_t count);
Tensor slice_cols(const Tensor& a, std::size_t start, std::size_t count);
// Appends zero rows until the result has `total` rows.
Tensor pad_rows(const Tensor& a, std::size_t total);

// Row i of the result is the concatenation of rows i..i+k-1.
Tensor unfold_windows(const Tensor& seq, std::size_t k);
// Valid 1-D convolution with stride 1: seq [l x a], w [(k*a) x b] -> [(l-k+1) x b].
Tensor conv1d_valid(const Tensor& seq, const Tensor& w, const Tensor& b, std::size_t k);
// out[j] = max_i max(0, seq[i,j]); the gradient goes to the first argmax.
Tensor relu_maxpool(const Tensor& seq);

Tensor embedding_lookup(const Tensor& table, std::span<const int> ids);

// Row-wise softmax over the columns where key_mask is nonzero. Masked columns
// get probability exactly 0 and receive no gradient.
Tensor masked_softmax_rows(const Tensor& scores, std::span<const int> key_mask);

// Normalizes each row, then scales by gamma and shifts by beta.
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps = 1e-12);

// Mean cross-entropy over rows. `allowed`, when non-empty, restricts the
// softmax to the columns where it is nonzero.
Tensor cross_entropy(const Tensor& logits, std::span<const int> targets,
                     std::span<const int> allowed = {});
// Mean squared error against fixed targets.
Tensor mse(const Tensor& pred, std::span<const double> targets);

// Branch recording for non-differentiable points. While a KinkScope is alive
// on the current thread, piecewise ops fold their branch decisions into a
// signature; two forward passes with equal signatures took the same smooth
// piece.
class KinkScope {
 public:
  KinkScope();
  ~KinkScope();
  KinkScope(const KinkScope&) = delete;
  KinkScope& operator=(const KinkScope&) = delete;
  std::uint64_t signature() const { return signature_; }

 private:
  friend void note_branch(std::uint64_t decision);
  std::uint64_t signature_ = 1469598103934665603ULL;
  KinkScope* previous_;
};

void note_branch(std::uint64_t decision);

}  // namespace sembert::num
