// SPDX-License-Identifier: Apache-2.0
#include "sembert/model.hpp"

#include <algorithm>
#include <optional>

#include "sembert/error.hpp"
#include "sembert/num/ops.hpp"

namespace sembert {

namespace {

constexpr std::size_t kDerivedPieceChars = 4;

}  // namespace

Model Model::create(const RunConfig& config, Vocab vocab, LabelVocab labels) {
  config.validate();
  Model model(config, std::move(vocab), std::move(labels));
  num::Rng rng(config.seed);
  model.encoder_ = EncoderParams::init(config.encoder_config(model.vocab_.size()), rng);
  model.fusion_ = FusionParams::init(config.d_enc, config.d_w, config.kernel_size, rng);
  model.embedder_ = EmbedderParams::init(config.embedder_config(model.labels_.size()), rng);
  model.head_ = HeadParams::init(config.task_kind, model.head_width(), config.num_labels, rng);
  return model;
}

std::size_t Model::head_width() const {
  switch (config_.fusion_mode) {
    case FusionMode::SemBert:
      return config_.d_w + config_.d;
    case FusionMode::Baseline:
      return config_.d_w;
    case FusionMode::SubwordAblation:
      return config_.d_enc + config_.m * config_.d_srl;
  }
  return 0;
}

PreparedExample Model::prepare(const TaskExample& example) const {
  const auto tok_a = tokenize_words(example.words_a, vocab_);
  std::optional<TokenizedSentence> tok_b;
  if (example.has_b()) tok_b = tokenize_words(example.words_b, vocab_);
  const auto enc = encode_pair(tok_a, tok_b ? &*tok_b : nullptr, config_.max_len, vocab_);
  const std::size_t n_real = enc.real_length();

  PreparedExample ex;
  ex.id = example.id;
  ex.ids.assign(enc.ids.begin(), enc.ids.begin() + static_cast<std::ptrdiff_t>(n_real));
  ex.segments.assign(enc.segments.begin(),
                     enc.segments.begin() + static_cast<std::ptrdiff_t>(n_real));
  ex.mask.assign(n_real, 1);
  ex.label = example.label;
  ex.score = example.score;

  const std::size_t kept_a = enc.spans_a.size();
  const std::size_t kept_b = enc.spans_b.size();
  ex.word_spans.push_back({enc.cls_position, 1});
  ex.word_spans.insert(ex.word_spans.end(), enc.spans_a.begin(), enc.spans_a.end());
  ex.word_spans.push_back({enc.sep_positions[0], 1});
  if (enc.has_b) {
    ex.word_spans.insert(ex.word_spans.end(), enc.spans_b.begin(), enc.spans_b.end());
    ex.word_spans.push_back({enc.sep_positions[1], 1});
  }

  const int o = labels_.outside_id();
  const auto fa = select_frames(example.srl_a, config_.m, example.words_a.size(), labels_);
  std::vector<SrlFrame> fb;
  if (enc.has_b) fb = select_frames(example.srl_b, config_.m, example.words_b.size(), labels_);
  for (std::size_t f = 0; f < config_.m; ++f) {
    SrlFrame frame;
    frame.predicate = fa[f].predicate >= 0 && static_cast<std::size_t>(fa[f].predicate) < kept_a
                          ? fa[f].predicate + 1
                          : -1;
    frame.labels.push_back(o);
    frame.labels.insert(frame.labels.end(), fa[f].labels.begin(),
                        fa[f].labels.begin() + static_cast<std::ptrdiff_t>(kept_a));
    frame.labels.push_back(o);
    if (enc.has_b) {
      frame.labels.insert(frame.labels.end(), fb[f].labels.begin(),
                          fb[f].labels.begin() + static_cast<std::ptrdiff_t>(kept_b));
      frame.labels.push_back(o);
    }
    ex.frames.push_back(std::move(frame));
  }

  if (config_.task_kind == TaskKind::Span) {
    ex.passage = example.words_b;
    ex.gold_texts = example.answer_texts();
    const bool subword_rows = config_.fusion_mode == FusionMode::SubwordAblation;
    const std::size_t rows = subword_rows ? n_real : ex.word_spans.size();
    ex.candidates.assign(rows, 0);
    ex.row_word.assign(rows, -1);
    const std::size_t offset = 1 + kept_a + 1;
    for (std::size_t k = 0; k < kept_b; ++k) {
      if (subword_rows) {
        const auto& s = enc.spans_b[k];
        for (std::size_t r = s.start; r < s.start + s.length; ++r) {
          ex.candidates[r] = 1;
          ex.row_word[r] = static_cast<int>(k);
        }
      } else {
        ex.candidates[offset + k] = 1;
        ex.row_word[offset + k] = static_cast<int>(k);
      }
    }
    for (const auto& a : example.answers) {
      if (a.end >= kept_b) continue;
      if (subword_rows) {
        ex.start_target = static_cast<int>(enc.spans_b[a.start].start);
        const auto& last = enc.spans_b[a.end];
        ex.end_target = static_cast<int>(last.start + last.length - 1);
      } else {
        ex.start_target = static_cast<int>(offset + a.start);
        ex.end_target = static_cast<int>(offset + a.end);
      }
      break;
    }
  }
  return ex;
}

num::Tensor Model::represent(const PreparedExample& ex) const {
  num::Tensor enc = encode(ex.ids, ex.segments, ex.mask, encoder_);
  switch (config_.fusion_mode) {
    case FusionMode::SemBert: {
      num::Tensor e_w = subwords_to_words(enc, ex.word_spans, fusion_);
      return fuse(e_w, embed_frames(ex.frames, embedder_).e_t).h;
    }
    case FusionMode::Baseline:
      return subwords_to_words(enc, ex.word_spans, fusion_);
    case FusionMode::SubwordAblation:
      return fuse_subword_ablation(enc, ex.frames, ex.word_spans, embedder_.label_table, labels_);
  }
  throw PreconditionError("unknown fusion mode");
}

num::Tensor Model::loss(const PreparedExample& ex) const {
  num::Tensor h = represent(ex);
  switch (config_.task_kind) {
    case TaskKind::Classification: {
      const int target[] = {ex.label};
      return num::cross_entropy(classify(h, head_), target);
    }
    case TaskKind::Regression: {
      const double target[] = {ex.score};
      return num::mse(classify(h, head_), target);
    }
    case TaskKind::Span: {
      std::vector<int> allowed = ex.candidates;
      allowed[0] = 1;
      return span_loss(span_logits(h, head_), allowed, ex.start_target, ex.end_target);
    }
  }
  throw PreconditionError("unknown task kind");
}

Prediction Model::predict(const PreparedExample& ex, double tau) const {
  num::NoGradScope no_grad;
  num::Tensor h = represent(ex);
  Prediction out;
  switch (config_.task_kind) {
    case TaskKind::Classification: {
      const num::Tensor logits = classify(h, head_);
      auto v = logits.values();
      out.label = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
      out.value = out.label;
      break;
    }
    case TaskKind::Regression:
      out.value = classify(h, head_).item();
      break;
    case TaskKind::Span: {
      auto logits = span_logits(h, head_);
      out.span = decode_span(logits.start.values(), logits.end.values(), ex.candidates, tau,
                             config_.max_span_len);
      if (!out.span.is_null) {
        const int first = ex.row_word[out.span.start];
        const int last = ex.row_word[out.span.end];
        for (int k = first; k <= last; ++k) {
          if (!out.text.empty()) out.text += ' ';
          out.text += ex.passage[static_cast<std::size_t>(k)];
        }
      }
      break;
    }
  }
  return out;
}

num::ParamList Model::params() const {
  num::ParamList out;
  encoder_.append_to(out, "encoder");
  switch (config_.fusion_mode) {
    case FusionMode::SemBert:
      fusion_.append_to(out, "fusion");
      embedder_.append_to(out, "embedder");
      break;
    case FusionMode::Baseline:
      fusion_.append_to(out, "fusion");
      break;
    case FusionMode::SubwordAblation:
      out.push_back({"embedder.label_table", embedder_.label_table, false});
      break;
  }
  head_.append_to(out, "head");
  return out;
}

num::ParamList Model::all_params() const {
  num::ParamList out;
  encoder_.append_to(out, "encoder");
  fusion_.append_to(out, "fusion");
  embedder_.append_to(out, "embedder");
  head_.append_to(out, "head");
  return out;
}

Vocab resolve_vocab(const RunConfig& config,
                    const std::vector<const std::vector<TaskExample>*>& data) {
  if (!config.vocab.empty()) return Vocab::load(config.vocab);
  std::vector<std::string> words;
  for (const auto* set : data) {
    if (!set) continue;
    for (const auto& ex : *set) {
      words.insert(words.end(), ex.words_a.begin(), ex.words_a.end());
      words.insert(words.end(), ex.words_b.begin(), ex.words_b.end());
    }
  }
  return Vocab::from_words(words, kDerivedPieceChars);
}

LabelVocab resolve_labels(const RunConfig& config) {
  if (!config.label_vocab.empty()) return LabelVocab::load(config.label_vocab);
  return LabelVocab::standard();
}

}  // namespace sembert
