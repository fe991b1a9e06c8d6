// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "sembert/num/param.hpp"
#include "sembert/num/tensor.hpp"

namespace sembert::num {

// One GRU direction. Gate blocks along the 3h axis are ordered
// (update z, reset r, candidate n):
//
//   z  = sigmoid(x Wx_z + b_z + h Wh_z)
//   r  = sigmoid(x Wx_r + b_r + h Wh_r)
//   n  = tanh(x Wx_n + b_n + (r * h) Wh_n)
//   h' = (1 - z) * n + z * h
//
// The initial state is zero.
struct GruParams {
  Tensor w_x;  // [d_in x 3h]
  Tensor w_h;  // [h x 3h]
  Tensor b;    // [3h]

  std::size_t hidden() const { return w_h.rows(); }
  std::size_t input() const { return w_x.rows(); }
  static GruParams init(std::size_t d_in, std::size_t hidden, Rng& rng);
  static GruParams zeros(std::size_t d_in, std::size_t hidden);
  void append_to(ParamList& out, const std::string& prefix) const;
};

// Left-to-right and right-to-left directions with independent parameters.
struct BiGruParams {
  GruParams fwd;
  GruParams bwd;

  std::size_t hidden() const { return fwd.hidden(); }
  static BiGruParams init(std::size_t d_in, std::size_t hidden, Rng& rng);
  static BiGruParams zeros(std::size_t d_in, std::size_t hidden);
  void append_to(ParamList& out, const std::string& prefix) const;
};

// One recurrence step. `x_proj` is the 1 x 3h row x Wx + b.
Tensor gru_cell(const Tensor& x_proj, const Tensor& h_prev, const Tensor& w_h);

// seq [n x d_in] -> [n x 2h]; row i is [forward state at i, backward state at i].
Tensor bigru_forward(const Tensor& seq, const BiGruParams& params);

}  // namespace sembert::num
