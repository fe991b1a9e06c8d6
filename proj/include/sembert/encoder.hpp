// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "sembert/num/param.hpp"

namespace sembert {

// Small post-layer-norm transformer encoder, randomly initialized. It stands
// in for a pre-trained BERT with the same input/output contract.
struct EncoderConfig {
  std::size_t vocab_size = 0;
  std::size_t d_enc = 48;
  std::size_t n_layers = 2;
  std::size_t n_heads = 4;
  std::size_t d_ff = 96;
  std::size_t max_positions = 128;
  std::size_t type_vocab = 2;
  // Layer norm over the summed embeddings before the first layer.
  bool embedding_layer_norm = true;

  void validate() const;
};

struct EncoderLayerParams {
  // No key bias: it adds the same q.b term to every score in a row, which
  // softmax cancels, so its gradient is identically zero.
  num::Tensor wq, bq, wk, wv, bv, wo, bo;
  num::Tensor ln1_gamma, ln1_beta;
  num::Tensor w_ff1, b_ff1, w_ff2, b_ff2;
  num::Tensor ln2_gamma, ln2_beta;
};

struct EncoderParams {
  EncoderConfig config;
  num::Tensor token_embedding;     // [vocab x d_enc]
  num::Tensor position_embedding;  // [max_positions x d_enc]
  num::Tensor segment_embedding;   // [type_vocab x d_enc]
  num::Tensor emb_gamma, emb_beta;
  std::vector<EncoderLayerParams> layers;

  static EncoderParams init(const EncoderConfig& config, num::Rng& rng);
  void append_to(num::ParamList& out, const std::string& prefix) const;
};

// Token + position + segment embeddings followed by n_layers of masked
// multi-head self-attention and a GELU feed-forward block, each with a
// residual connection and layer norm. Keys where mask == 0 are never
// attended to. Returns one row per input position.
//
// When `attention` is given, every layer's per-head attention matrices are
// appended to it (layer-major).
num::Tensor encode(std::span<const int> ids, std::span<const int> segments,
                   std::span<const int> mask, const EncoderParams& params,
                   std::vector<num::Tensor>* attention = nullptr);

}  // namespace sembert
