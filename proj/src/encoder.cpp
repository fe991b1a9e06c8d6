// SPDX-License-Identifier: Apache-2.0
#include "sembert/encoder.hpp"

#include <cmath>
#include <numeric>

#include "sembert/error.hpp"
#include "sembert/num/ops.hpp"

namespace sembert {

namespace {

constexpr double kEmbeddingBound = 0.05;

std::vector<int> iota_ids(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

num::Tensor self_attention(const num::Tensor& x, const EncoderLayerParams& p,
                           std::size_t heads, std::span<const int> mask,
                           std::vector<num::Tensor>* attention) {
  const std::size_t d = x.cols();
  const std::size_t dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  num::Tensor q = num::linear(x, p.wq, p.bq);
  num::Tensor k = num::matmul(x, p.wk);
  num::Tensor v = num::linear(x, p.wv, p.bv);
  std::vector<num::Tensor> outs;
  outs.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    num::Tensor qh = num::slice_cols(q, h * dh, dh);
    num::Tensor kh = num::slice_cols(k, h * dh, dh);
    num::Tensor vh = num::slice_cols(v, h * dh, dh);
    num::Tensor scores = num::affine(num::matmul(qh, num::transpose(kh)), scale);
    num::Tensor probs = num::masked_softmax_rows(scores, mask);
    if (attention) attention->push_back(probs);
    outs.push_back(num::matmul(probs, vh));
  }
  return num::linear(heads == 1 ? outs[0] : num::concat_cols(outs), p.wo, p.bo);
}

}  // namespace

void EncoderConfig::validate() const {
  if (vocab_size == 0) throw ValidationError("encoder vocab_size must be positive");
  if (d_enc == 0 || n_heads == 0 || d_enc % n_heads != 0) {
    throw ValidationError("d_enc (" + std::to_string(d_enc) + ") must be a positive multiple of n_heads (" +
                          std::to_string(n_heads) + ")");
  }
  if (d_ff == 0) throw ValidationError("d_ff must be positive");
  if (max_positions < 3) throw ValidationError("max_positions must be at least 3");
  if (type_vocab < 1) throw ValidationError("type_vocab must be positive");
}

EncoderParams EncoderParams::init(const EncoderConfig& c, num::Rng& rng) {
  c.validate();
  EncoderParams p;
  p.config = c;
  p.token_embedding = num::uniform_table(c.vocab_size, c.d_enc, kEmbeddingBound, rng);
  p.position_embedding = num::uniform_table(c.max_positions, c.d_enc, kEmbeddingBound, rng);
  p.segment_embedding = num::uniform_table(c.type_vocab, c.d_enc, kEmbeddingBound, rng);
  p.emb_gamma = num::one_param({c.d_enc});
  p.emb_beta = num::zero_param({c.d_enc});
  for (std::size_t l = 0; l < c.n_layers; ++l) {
    EncoderLayerParams lp;
    lp.wq = num::xavier_uniform(c.d_enc, c.d_enc, rng);
    lp.bq = num::zero_param({c.d_enc});
    lp.wk = num::xavier_uniform(c.d_enc, c.d_enc, rng);
    lp.wv = num::xavier_uniform(c.d_enc, c.d_enc, rng);
    lp.bv = num::zero_param({c.d_enc});
    lp.wo = num::xavier_uniform(c.d_enc, c.d_enc, rng);
    lp.bo = num::zero_param({c.d_enc});
    lp.ln1_gamma = num::one_param({c.d_enc});
    lp.ln1_beta = num::zero_param({c.d_enc});
    lp.w_ff1 = num::xavier_uniform(c.d_enc, c.d_ff, rng);
    lp.b_ff1 = num::zero_param({c.d_ff});
    lp.w_ff2 = num::xavier_uniform(c.d_ff, c.d_enc, rng);
    lp.b_ff2 = num::zero_param({c.d_enc});
    lp.ln2_gamma = num::one_param({c.d_enc});
    lp.ln2_beta = num::zero_param({c.d_enc});
    p.layers.push_back(std::move(lp));
  }
  return p;
}

void EncoderParams::append_to(num::ParamList& out, const std::string& prefix) const {
  out.push_back({prefix + ".token_embedding", token_embedding, false});
  out.push_back({prefix + ".position_embedding", position_embedding, false});
  out.push_back({prefix + ".segment_embedding", segment_embedding, false});
  out.push_back({prefix + ".emb_ln.gamma", emb_gamma, false});
  out.push_back({prefix + ".emb_ln.beta", emb_beta, false});
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& lp = layers[l];
    const std::string base = prefix + ".layer" + std::to_string(l);
    out.push_back({base + ".attn.wq", lp.wq, true});
    out.push_back({base + ".attn.bq", lp.bq, false});
    out.push_back({base + ".attn.wk", lp.wk, true});
    out.push_back({base + ".attn.wv", lp.wv, true});
    out.push_back({base + ".attn.bv", lp.bv, false});
    out.push_back({base + ".attn.wo", lp.wo, true});
    out.push_back({base + ".attn.bo", lp.bo, false});
    out.push_back({base + ".ln1.gamma", lp.ln1_gamma, false});
    out.push_back({base + ".ln1.beta", lp.ln1_beta, false});
    out.push_back({base + ".ff.w1", lp.w_ff1, true});
    out.push_back({base + ".ff.b1", lp.b_ff1, false});
    out.push_back({base + ".ff.w2", lp.w_ff2, true});
    out.push_back({base + ".ff.b2", lp.b_ff2, false});
    out.push_back({base + ".ln2.gamma", lp.ln2_gamma, false});
    out.push_back({base + ".ln2.beta", lp.ln2_beta, false});
  }
}

num::Tensor encode(std::span<const int> ids, std::span<const int> segments,
                   std::span<const int> mask, const EncoderParams& params,
                   std::vector<num::Tensor>* attention) {
  const auto& c = params.config;
  if (ids.size() != segments.size() || ids.size() != mask.size()) {
    throw DimensionError("encode: ids/segments/mask lengths " + std::to_string(ids.size()) +
                         "/" + std::to_string(segments.size()) + "/" +
                         std::to_string(mask.size()) + " differ");
  }
  if (ids.empty()) throw PreconditionError("encode: empty input");
  if (ids.size() > c.max_positions) {
    throw LengthError("encode: sequence of " + std::to_string(ids.size()) +
                      " tokens exceeds max_positions " + std::to_string(c.max_positions));
  }
  num::Tensor x = num::add(
      num::add(num::embedding_lookup(params.token_embedding, ids),
               num::embedding_lookup(params.position_embedding, iota_ids(ids.size()))),
      num::embedding_lookup(params.segment_embedding, segments));
  if (c.embedding_layer_norm) x = num::layer_norm(x, params.emb_gamma, params.emb_beta);
  for (const auto& layer : params.layers) {
    num::Tensor attn = self_attention(x, layer, c.n_heads, mask, attention);
    x = num::layer_norm(num::add(x, attn), layer.ln1_gamma, layer.ln1_beta);
    num::Tensor ff = num::linear(num::gelu(num::linear(x, layer.w_ff1, layer.b_ff1)),
                                 layer.w_ff2, layer.b_ff2);
    x = num::layer_norm(num::add(x, ff), layer.ln2_gamma, layer.ln2_beta);
  }
  return x;
}

}  // namespace sembert
