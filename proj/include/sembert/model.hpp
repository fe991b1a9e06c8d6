// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "sembert/config.hpp"
#include "sembert/dataset.hpp"
#include "sembert/encoder.hpp"
#include "sembert/fusion.hpp"
#include "sembert/heads.hpp"
#include "sembert/semantic_embedder.hpp"
#include "sembert/srl.hpp"
#include "sembert/tokenizer.hpp"

namespace sembert {

// One example turned into model inputs. The pair is viewed as the word
// sequence [CLS] a-words [SEP] b-words [SEP]; the special tokens are words
// of their own labeled O in every frame.
struct PreparedExample {
  std::string id;
  // Encoder input without padding.
  std::vector<int> ids;
  std::vector<int> segments;
  std::vector<int> mask;
  // Subword rows of every word in the sequence above.
  std::vector<WordSpan> word_spans;
  // m frames, one label per word.
  std::vector<SrlFrame> frames;

  int label = 0;
  double score = 0.0;

  // Span tasks. Head rows are words, or subwords in subword_ablation mode;
  // row 0 ([CLS]) stands for "no answer".
  std::vector<int> candidates;
  int start_target = 0;
  int end_target = 0;
  // Passage word index per head row, -1 outside the passage.
  std::vector<int> row_word;
  std::vector<std::string> passage;
  std::vector<std::string> gold_texts;
};

struct Prediction {
  int label = 0;
  double value = 0.0;
  SpanPrediction span;
  // Passage words of the predicted span; empty for "no answer".
  std::string text;
};

class Model {
 public:
  // Parameters are drawn from Rng(config.seed) in a fixed order (encoder,
  // aligner, semantic embedder, head) whatever the fusion mode.
  static Model create(const RunConfig& config, Vocab vocab, LabelVocab labels);

  PreparedExample prepare(const TaskExample& example) const;

  // Fused representation h, one row per head row.
  num::Tensor represent(const PreparedExample& ex) const;
  num::Tensor loss(const PreparedExample& ex) const;
  Prediction predict(const PreparedExample& ex, double tau = 0.0) const;

  // Parameters that take part in the forward pass of the configured mode.
  num::ParamList params() const;
  // Every parameter, used or not, for checkpoints.
  num::ParamList all_params() const;

  std::size_t head_width() const;
  const RunConfig& config() const { return config_; }
  const Vocab& vocab() const { return vocab_; }
  const LabelVocab& labels() const { return labels_; }
  const EmbedderParams& embedder() const { return embedder_; }

 private:
  Model(RunConfig config, Vocab vocab, LabelVocab labels)
      : config_(std::move(config)), vocab_(std::move(vocab)), labels_(std::move(labels)) {}

  RunConfig config_;
  Vocab vocab_;
  LabelVocab labels_;
  EncoderParams encoder_;
  FusionParams fusion_;
  EmbedderParams embedder_;
  HeadParams head_;
};

// Vocabulary named by config.vocab, or one derived from the words of the
// given examples (4-character pieces) when that is empty.
Vocab resolve_vocab(const RunConfig& config, const std::vector<const std::vector<TaskExample>*>& data);
LabelVocab resolve_labels(const RunConfig& config);

}  // namespace sembert
