// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

#include "sembert/num/gru.hpp"
#include "sembert/num/param.hpp"
#include "sembert/srl.hpp"

namespace sembert {

struct EmbedderConfig {
  std::size_t num_labels = 104;
  std::size_t d_srl = 10;
  // Hidden width of each BiGRU direction.
  std::size_t hidden = 10;
  // Width of the joint semantic embedding e^t.
  std::size_t d = 10;
  std::size_t m = 3;
};

// Label lookup table, one BiGRU shared by every frame, and the projection
// from the m concatenated frame encodings to width d.
struct EmbedderParams {
  num::Tensor label_table;  // [|labels| x d_srl]
  num::BiGruParams bigru;
  num::Tensor w2;  // [(m * 2h) x d]
  num::Tensor b2;  // [d]
  std::size_t m = 0;

  static EmbedderParams init(const EmbedderConfig& config, num::Rng& rng);
  static EmbedderParams zeros(const EmbedderConfig& config);
  void append_to(num::ParamList& out, const std::string& prefix) const;
};

struct SemanticEmbedding {
  num::Tensor e_t;  // [n x d]
};

// Per frame: label lookup, BiGRU over the word sequence. Per word: the m
// frame encodings side by side, projected to width d.
SemanticEmbedding embed_frames(std::span<const SrlFrame> frames, const EmbedderParams& params);

}  // namespace sembert
