// SPDX-License-Identifier: Apache-2.0
#include "sembert/semantic_embedder.hpp"

#include "sembert/error.hpp"
#include "sembert/num/ops.hpp"

namespace sembert {

namespace {
constexpr double kEmbeddingBound = 0.05;
}

EmbedderParams EmbedderParams::init(const EmbedderConfig& c, num::Rng& rng) {
  EmbedderParams p;
  p.label_table = num::uniform_table(c.num_labels, c.d_srl, kEmbeddingBound, rng);
  p.bigru = num::BiGruParams::init(c.d_srl, c.hidden, rng);
  p.w2 = num::xavier_uniform(c.m * 2 * c.hidden, c.d, rng);
  p.b2 = num::zero_param({c.d});
  p.m = c.m;
  return p;
}

EmbedderParams EmbedderParams::zeros(const EmbedderConfig& c) {
  EmbedderParams p;
  p.label_table = num::zero_param({c.num_labels, c.d_srl});
  p.bigru = num::BiGruParams::zeros(c.d_srl, c.hidden);
  p.w2 = num::zero_param({c.m * 2 * c.hidden, c.d});
  p.b2 = num::zero_param({c.d});
  p.m = c.m;
  return p;
}

void EmbedderParams::append_to(num::ParamList& out, const std::string& prefix) const {
  out.push_back({prefix + ".label_table", label_table, false});
  bigru.append_to(out, prefix + ".bigru");
  out.push_back({prefix + ".w2", w2, true});
  out.push_back({prefix + ".b2", b2, false});
}

SemanticEmbedding embed_frames(std::span<const SrlFrame> frames, const EmbedderParams& params) {
  if (frames.size() != params.m) {
    throw DimensionError("embed_frames: " + std::to_string(frames.size()) +
                         " frames for an embedder built for m=" + std::to_string(params.m));
  }
  const std::size_t n = frames.front().labels.size();
  if (n == 0) throw DimensionError("embed_frames: frames have no words");
  std::vector<num::Tensor> encoded;
  encoded.reserve(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    if (frames[f].labels.size() != n) {
      throw DimensionError("embed_frames: frame " + std::to_string(f) + " has length " +
                           std::to_string(frames[f].labels.size()) + ", expected " +
                           std::to_string(n));
    }
    encoded.push_back(
        num::bigru_forward(num::embedding_lookup(params.label_table, frames[f].labels), params.bigru));
  }
  return {num::linear(num::concat_cols(encoded), params.w2, params.b2)};
}

}  // namespace sembert
