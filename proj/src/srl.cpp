// SPDX-License-Identifier: Apache-2.0
#include "sembert/srl.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include "sembert/error.hpp"

namespace sembert {

namespace {

constexpr std::size_t kStandardLabelCount = 104;

const std::vector<std::string>& canonical_roles() {
  static const std::vector<std::string> roles = {
      "ARG0",        "ARG1",        "ARG2",        "ARG3",        "ARG4",        "ARG5",
      "ARGA",        "ARGM-ADJ",    "ARGM-ADV",    "ARGM-CAU",    "ARGM-COM",    "ARGM-DIR",
      "ARGM-DIS",    "ARGM-DSP",    "ARGM-EXT",    "ARGM-GOL",    "ARGM-LOC",    "ARGM-LVB",
      "ARGM-MNR",    "ARGM-MOD",    "ARGM-NEG",    "ARGM-PNC",    "ARGM-PRD",    "ARGM-PRP",
      "ARGM-PRR",    "ARGM-PRX",    "ARGM-REC",    "ARGM-TMP",    "R-ARG0",      "R-ARG1",
      "R-ARG2",      "R-ARG3",      "R-ARG4",      "R-ARGM-ADV",  "R-ARGM-CAU",  "R-ARGM-DIR",
      "R-ARGM-EXT",  "R-ARGM-LOC",  "R-ARGM-MNR",  "R-ARGM-PRP",  "R-ARGM-TMP",  "C-ARG0",
      "C-ARG1",      "C-ARG2",      "C-ARG3",      "C-ARG4"};
  return roles;
}

}  // namespace

LabelVocab::LabelVocab(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::unordered_map<std::string, int> role_ids;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const std::string& l = labels_[i];
    if (!index_.emplace(l, static_cast<int>(i)).second) {
      throw VocabError("duplicate label '" + l + "'");
    }
    TagKind kind;
    std::string role;
    if (l == kOutside) {
      kind = TagKind::Outside;
    } else if (l == kVerb) {
      kind = TagKind::Verb;
    } else if (l.size() > 2 && (l[0] == 'B' || l[0] == 'I') && l[1] == '-') {
      kind = l[0] == 'B' ? TagKind::Begin : TagKind::Inside;
      role = l.substr(2);
    } else {
      throw VocabError("label '" + l + "' is not O, V, B-X or I-X");
    }
    kinds_.push_back(kind);
    if (role.empty()) {
      roles_.push_back(-1);
    } else {
      auto [it, _] = role_ids.emplace(role, static_cast<int>(role_ids.size()));
      roles_.push_back(it->second);
    }
  }
  auto o = find(kOutside);
  auto v = find(kVerb);
  if (!o || !v) throw VocabError("label vocabulary must contain O and V");
  outside_ = *o;
  verb_ = *v;
}

LabelVocab LabelVocab::standard() {
  std::vector<std::string> roles = canonical_roles();
  for (int k = 1; 2 + 2 * roles.size() < kStandardLabelCount; ++k) {
    roles.push_back("ROLE-" + std::to_string(k));
  }
  std::vector<std::string> labels{std::string(kOutside), std::string(kVerb)};
  for (const auto& r : roles) {
    labels.push_back("B-" + r);
    labels.push_back("I-" + r);
  }
  return LabelVocab(std::move(labels));
}

LabelVocab LabelVocab::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw VocabError("cannot open label file " + path.string());
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) labels.push_back(line);
  }
  return LabelVocab(std::move(labels));
}

void LabelVocab::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw VocabError("cannot write label file " + path.string());
  for (const auto& l : labels_) out << l << '\n';
}

std::optional<int> LabelVocab::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int LabelVocab::id(std::string_view label) const {
  auto v = find(label);
  if (!v) throw VocabError("unknown semantic role label '" + std::string(label) + "'");
  return *v;
}

const std::string& LabelVocab::label(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= labels_.size()) {
    throw IndexError("label id " + std::to_string(id) + " outside label vocabulary of " +
                     std::to_string(labels_.size()));
  }
  return labels_[static_cast<std::size_t>(id)];
}

bool LabelVocab::can_follow(int prev, int next) const {
  if (kind(next) != TagKind::Inside) return true;
  const TagKind pk = kind(prev);
  return (pk == TagKind::Begin || pk == TagKind::Inside) && role(prev) == role(next);
}

bool is_valid_bio(std::span<const int> labels, const LabelVocab& vocab) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i == 0 ? !vocab.can_start(labels[0]) : !vocab.can_follow(labels[i - 1], labels[i])) {
      return false;
    }
  }
  return true;
}

SrlAnnotation load_annotation(const std::vector<RawFrame>& frames, std::size_t n_words,
                              const LabelVocab& vocab) {
  SrlAnnotation out;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const RawFrame& raw = frames[f];
    const std::string where = "frame " + std::to_string(f);
    if (raw.tags.size() != n_words) {
      throw AlignmentError(where + " has " + std::to_string(raw.tags.size()) +
                           " tags for a sentence of " + std::to_string(n_words) + " words");
    }
    SrlFrame frame;
    frame.predicate = raw.pred;
    for (const auto& t : raw.tags) {
      auto id = vocab.find(t);
      if (!id) throw VocabError(where + ": unknown semantic role label '" + t + "'");
      frame.labels.push_back(*id);
    }
    if (raw.pred < 0 || static_cast<std::size_t>(raw.pred) >= n_words) {
      throw StructureError(where + ": predicate index " + std::to_string(raw.pred) +
                           " outside the sentence");
    }
    for (std::size_t i = 0; i < n_words; ++i) {
      const bool is_pred = static_cast<int>(i) == raw.pred;
      const bool is_verb = frame.labels[i] == vocab.verb_id();
      if (is_pred != is_verb) {
        throw StructureError(where + ": position " + std::to_string(i) +
                             (is_pred ? " is the predicate but is not tagged V"
                                      : " is tagged V but is not the predicate"));
      }
      const bool legal = i == 0 ? vocab.can_start(frame.labels[i])
                                : vocab.can_follow(frame.labels[i - 1], frame.labels[i]);
      if (!legal) {
        throw StructureError(where + ": BIO violation at position " + std::to_string(i) +
                             " ('" + raw.tags[i] + "')");
      }
    }
    out.frames.push_back(std::move(frame));
  }
  std::stable_sort(out.frames.begin(), out.frames.end(),
                   [](const SrlFrame& a, const SrlFrame& b) { return a.predicate < b.predicate; });
  for (std::size_t f = 1; f < out.frames.size(); ++f) {
    if (out.frames[f].predicate == out.frames[f - 1].predicate) {
      throw StructureError("two frames share predicate index " +
                           std::to_string(out.frames[f].predicate));
    }
  }
  return out;
}

SrlAnnotation inject_noise(const SrlAnnotation& annotation, double p, const LabelVocab& vocab,
                           num::Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw RangeError("noise fraction must lie in [0, 1]");
  SrlAnnotation out = annotation;
  if (p == 0.0 || vocab.size() < 2) return out;
  const auto others = static_cast<std::uint64_t>(vocab.size() - 1);
  for (auto& frame : out.frames) {
    for (auto& label : frame.labels) {
      if (!rng.bernoulli(p)) continue;
      auto replacement = static_cast<int>(rng.below(others));
      if (replacement >= label) ++replacement;
      label = replacement;
    }
  }
  return out;
}

std::vector<SrlFrame> select_frames(const SrlAnnotation& annotation, std::size_t m,
                                    std::size_t n_words, const LabelVocab& vocab) {
  if (m < 1) throw RangeError("m must be at least 1");
  std::vector<SrlFrame> out;
  for (const auto& f : annotation.frames) {
    if (out.size() == m) break;
    if (f.labels.size() != n_words) {
      throw AlignmentError("frame with predicate " + std::to_string(f.predicate) + " has " +
                           std::to_string(f.labels.size()) + " labels, expected " +
                           std::to_string(n_words));
    }
    out.push_back(f);
  }
  while (out.size() < m) {
    out.push_back({-1, std::vector<int>(n_words, vocab.outside_id())});
  }
  return out;
}

std::vector<int> viterbi_decode(const num::Tensor& scores, const LabelVocab& vocab) {
  const std::size_t n = scores.rows(), L = scores.cols();
  if (L != vocab.size()) {
    throw DimensionError("viterbi_decode: " + std::to_string(L) + " score columns for " +
                         std::to_string(vocab.size()) + " labels");
  }
  if (n == 0) throw PreconditionError("viterbi_decode: empty sequence");
  constexpr double kNeg = -std::numeric_limits<double>::infinity();
  auto s = scores.values();

  std::vector<double> best(L), next(L);
  std::vector<int> back(n * L, -1);
  for (std::size_t y = 0; y < L; ++y) {
    best[y] = vocab.can_start(static_cast<int>(y)) ? s[y] : kNeg;
  }
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t y = 0; y < L; ++y) {
      double top = kNeg;
      int arg = -1;
      for (std::size_t prev = 0; prev < L; ++prev) {
        if (best[prev] == kNeg) continue;
        if (!vocab.can_follow(static_cast<int>(prev), static_cast<int>(y))) continue;
        if (best[prev] > top) {
          top = best[prev];
          arg = static_cast<int>(prev);
        }
      }
      next[y] = arg < 0 ? kNeg : top + s[i * L + y];
      back[i * L + y] = arg;
    }
    std::swap(best, next);
  }
  auto last = static_cast<int>(std::max_element(best.begin(), best.end()) - best.begin());
  std::vector<int> path(n);
  path[n - 1] = last;
  for (std::size_t i = n - 1; i > 0; --i) {
    path[i - 1] = back[i * L + static_cast<std::size_t>(path[i])];
  }
  return path;
}

}  // namespace sembert
