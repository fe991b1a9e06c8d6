// SPDX-License-Identifier: Apache-2.0
#include "sembert/fusion.hpp"

#include "sembert/error.hpp"
#include "sembert/num/ops.hpp"

namespace sembert {

std::string to_string(FusionMode mode) {
  switch (mode) {
    case FusionMode::SemBert:
      return "sembert";
    case FusionMode::SubwordAblation:
      return "subword_ablation";
    case FusionMode::Baseline:
      return "baseline";
  }
  return "unknown";
}

FusionMode parse_fusion_mode(std::string_view text) {
  if (text == "sembert") return FusionMode::SemBert;
  if (text == "subword_ablation") return FusionMode::SubwordAblation;
  if (text == "baseline") return FusionMode::Baseline;
  throw ValidationError("unknown fusion_mode '" + std::string(text) +
                        "' (expected sembert, subword_ablation or baseline)");
}

FusionParams FusionParams::init(std::size_t d_enc, std::size_t d_w, std::size_t k,
                                num::Rng& rng) {
  if (k < 1) throw RangeError("kernel size must be at least 1");
  if (d_w < 1) throw RangeError("d_w must be positive");
  return {num::xavier_uniform(k * d_enc, d_w, rng), num::zero_param({d_w}), k};
}

void FusionParams::append_to(num::ParamList& out, const std::string& prefix) const {
  out.push_back({prefix + ".w1", w1, true});
  out.push_back({prefix + ".b1", b1, false});
}

num::Tensor subwords_to_words(const num::Tensor& enc, std::span<const WordSpan> spans,
                              const FusionParams& params) {
  if (spans.empty()) throw AlignmentError("subwords_to_words: no words");
  std::vector<num::Tensor> words;
  words.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    if (s.length == 0 || s.start + s.length > enc.rows()) {
      throw AlignmentError("word " + std::to_string(i) + " spans rows [" +
                           std::to_string(s.start) + ", " + std::to_string(s.start + s.length) +
                           ") of an encoding with " + std::to_string(enc.rows()) + " rows");
    }
    num::Tensor rows = num::pad_rows(num::slice_rows(enc, s.start, s.length), params.k);
    words.push_back(num::relu_maxpool(num::conv1d_valid(rows, params.w1, params.b1, params.k)));
  }
  return num::concat_rows(words);
}

num::Tensor subwords_to_words(const num::Tensor& enc, const TokenizedSentence& sentence,
                              const FusionParams& params) {
  return subwords_to_words(enc, std::span<const WordSpan>(sentence.spans), params);
}

FusedRepresentation fuse(const num::Tensor& e_w, const num::Tensor& e_t) {
  if (!e_t.defined()) return {e_w, e_w.cols(), 0};
  if (e_w.rows() != e_t.rows()) {
    throw DimensionError("fuse: e_w " + num::shape_str(e_w.shape()) + " and e_t " +
                         num::shape_str(e_t.shape()) + " differ in word count");
  }
  if (e_t.cols() == 0) return {e_w, e_w.cols(), 0};
  return {num::concat_cols({e_w, e_t}), e_w.cols(), e_t.cols()};
}

num::Tensor fuse_subword_ablation(const num::Tensor& enc, std::span<const SrlFrame> frames,
                                  std::span<const WordSpan> spans, const num::Tensor& label_table,
                                  const LabelVocab& vocab) {
  const std::size_t rows = enc.rows();
  std::vector<int> word_of_row(rows, -1);
  for (std::size_t w = 0; w < spans.size(); ++w) {
    if (spans[w].start + spans[w].length > rows) {
      throw AlignmentError("word " + std::to_string(w) + " extends past row " +
                           std::to_string(rows));
    }
    for (std::size_t r = spans[w].start; r < spans[w].start + spans[w].length; ++r) {
      word_of_row[r] = static_cast<int>(w);
    }
  }
  std::vector<num::Tensor> parts{enc};
  for (std::size_t f = 0; f < frames.size(); ++f) {
    if (frames[f].labels.size() != spans.size()) {
      throw AlignmentError("frame " + std::to_string(f) + " has " +
                           std::to_string(frames[f].labels.size()) + " labels for " +
                           std::to_string(spans.size()) + " words");
    }
    std::vector<int> ids(rows, vocab.outside_id());
    for (std::size_t r = 0; r < rows; ++r) {
      if (word_of_row[r] >= 0) ids[r] = frames[f].labels[static_cast<std::size_t>(word_of_row[r])];
    }
    parts.push_back(num::embedding_lookup(label_table, ids));
  }
  return num::concat_cols(parts);
}

}  // namespace sembert
