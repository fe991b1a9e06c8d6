// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

#include "sembert/num/param.hpp"
#include "sembert/srl.hpp"
#include "sembert/tokenizer.hpp"

namespace sembert {

enum class FusionMode { SemBert, SubwordAblation, Baseline };

std::string to_string(FusionMode mode);
FusionMode parse_fusion_mode(std::string_view text);

struct FusionParams {
  num::Tensor w1;  // [(k * d_enc) x d_w]
  num::Tensor b1;  // [d_w]
  std::size_t k = 3;

  static FusionParams init(std::size_t d_enc, std::size_t d_w, std::size_t k, num::Rng& rng);
  void append_to(num::ParamList& out, const std::string& prefix) const;
};

struct FusedRepresentation {
  num::Tensor h;  // [n x (d_w + d)]
  std::size_t d_w = 0;
  std::size_t d = 0;
};

// Word-level alignment: each word's subword rows go through a window-k
// convolution, ReLU and max-pool over positions. Words with fewer than k
// subwords are zero-padded on the right. Convolution never crosses a word
// boundary.
num::Tensor subwords_to_words(const num::Tensor& enc, std::span<const WordSpan> spans,
                              const FusionParams& params);
num::Tensor subwords_to_words(const num::Tensor& enc, const TokenizedSentence& sentence,
                              const FusionParams& params);

// Column-wise concatenation [e_w, e_t]. An e_t of width 0 (or undefined)
// leaves e_w unchanged.
FusedRepresentation fuse(const num::Tensor& e_w, const num::Tensor& e_t);

// Subword-level variant without the aligner: every encoder row gets the raw
// label embeddings of its word under each of the m frames appended. Rows
// outside every span (specials, padding) get the O embedding.
num::Tensor fuse_subword_ablation(const num::Tensor& enc, std::span<const SrlFrame> frames,
                                  std::span<const WordSpan> spans, const num::Tensor& label_table,
                                  const LabelVocab& vocab);

}  // namespace sembert
