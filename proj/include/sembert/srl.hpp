// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sembert/num/rng.hpp"
#include "sembert/num/tensor.hpp"

namespace sembert {

enum class TagKind { Outside, Verb, Begin, Inside };

// Semantic role label inventory in BIO form: "O", "V", "B-<role>", "I-<role>".
class LabelVocab {
 public:
  static constexpr std::string_view kOutside = "O";
  static constexpr std::string_view kVerb = "V";

  explicit LabelVocab(std::vector<std::string> labels);

  // Canonical PropBank core and adjunct roles plus numbered placeholder roles,
  // 104 labels in total. "O" has id 0.
  static LabelVocab standard();
  static LabelVocab load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::size_t size() const { return labels_.size(); }
  std::optional<int> find(std::string_view label) const;
  // Throws VocabError for unknown labels.
  int id(std::string_view label) const;
  const std::string& label(int id) const;
  const std::vector<std::string>& labels() const { return labels_; }

  int outside_id() const { return outside_; }
  int verb_id() const { return verb_; }
  TagKind kind(int id) const { return kinds_.at(static_cast<std::size_t>(id)); }
  // Role index shared by B-X and I-X; -1 for O and V.
  int role(int id) const { return roles_.at(static_cast<std::size_t>(id)); }

  bool can_start(int id) const { return kind(id) != TagKind::Inside; }
  bool can_follow(int prev, int next) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
  std::vector<TagKind> kinds_;
  std::vector<int> roles_;
  int outside_ = -1;
  int verb_ = -1;
};

struct SrlFrame {
  // Word index of the predicate; -1 for an all-O padding frame.
  int predicate = -1;
  std::vector<int> labels;
};

struct SrlAnnotation {
  // Ordered by strictly increasing predicate index.
  std::vector<SrlFrame> frames;
};

// One frame as it appears in a dataset record.
struct RawFrame {
  int pred = -1;
  std::vector<std::string> tags;
};

bool is_valid_bio(std::span<const int> labels, const LabelVocab& vocab);

// Validates raw frames against a sentence of `n_words` words and returns
// them sorted by predicate.
SrlAnnotation load_annotation(const std::vector<RawFrame>& frames, std::size_t n_words,
                              const LabelVocab& vocab);

// Replaces each label, independently with probability p, by a uniformly
// drawn different label. The result is not re-validated.
SrlAnnotation inject_noise(const SrlAnnotation& annotation, double p, const LabelVocab& vocab,
                           num::Rng& rng);

// Exactly m frames of length n_words: the first m by predicate order, padded
// with all-O frames.
std::vector<SrlFrame> select_frames(const SrlAnnotation& annotation, std::size_t m,
                                    std::size_t n_words, const LabelVocab& vocab);

// Highest-scoring label path under BIO constraints (no transition scores).
// scores is [n x |labels|].
std::vector<int> viterbi_decode(const num::Tensor& scores, const LabelVocab& vocab);

}  // namespace sembert
