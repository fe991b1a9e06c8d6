// SPDX-License-Identifier: Apache-2.0
#include "sembert/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "sembert/error.hpp"

namespace sembert {

namespace {

bool is_utf8_continuation(char c) {
  return (static_cast<unsigned char>(c) & 0xC0) == 0x80;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(c));
  }
  return out;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream is{std::string(text)};
  std::string w;
  while (is >> w) words.push_back(w);
  return words;
}

}  // namespace

Vocab::Vocab(std::vector<std::string> entries) : entries_(std::move(entries)) {
  if (entries_.empty() || entries_[0] != kPad) {
    throw VocabError("vocabulary must start with [PAD] at id 0");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].empty()) throw VocabError("empty token at id " + std::to_string(i));
    if (!index_.emplace(entries_[i], static_cast<int>(i)).second) {
      throw VocabError("duplicate token '" + entries_[i] + "' at id " + std::to_string(i));
    }
  }
  auto require = [this](std::string_view t) {
    auto id = find(t);
    if (!id) throw VocabError("vocabulary lacks reserved token " + std::string(t));
    return *id;
  };
  unk_ = require(kUnk);
  cls_ = require(kCls);
  sep_ = require(kSep);
}

Vocab Vocab::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw VocabError("cannot open vocabulary file " + path.string());
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    entries.push_back(line);
  }
  while (!entries.empty() && entries.back().empty()) entries.pop_back();
  return Vocab(std::move(entries));
}

void Vocab::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw VocabError("cannot write vocabulary file " + path.string());
  for (const auto& e : entries_) out << e << '\n';
}

Vocab Vocab::from_words(const std::vector<std::string>& words, std::size_t piece_chars,
                        bool lowercase) {
  if (piece_chars == 0) throw RangeError("piece_chars must be positive");
  std::vector<std::string> entries{std::string(kPad), std::string(kUnk), std::string(kCls),
                                   std::string(kSep)};
  std::unordered_map<std::string, int> seen;
  for (const auto& e : entries) seen.emplace(e, 0);
  for (const auto& raw : words) {
    const std::string word = lowercase ? lower_ascii(raw) : raw;
    std::size_t pos = 0;
    bool first = true;
    while (pos < word.size()) {
      std::size_t end = pos, chars = 0;
      while (end < word.size() && chars < piece_chars) {
        ++end;
        while (end < word.size() && is_utf8_continuation(word[end])) ++end;
        ++chars;
      }
      std::string piece = (first ? "" : std::string(kContinuation)) + word.substr(pos, end - pos);
      if (seen.emplace(piece, 0).second) entries.push_back(piece);
      pos = end;
      first = false;
    }
  }
  return Vocab(std::move(entries));
}

std::optional<int> Vocab::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocab::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= entries_.size()) {
    throw IndexError("token id " + std::to_string(id) + " outside vocabulary of " +
                     std::to_string(entries_.size()));
  }
  return entries_[static_cast<std::size_t>(id)];
}

std::vector<int> wordpiece(std::string_view raw, const Vocab& vocab,
                           const TokenizerOptions& options) {
  const std::string word = options.lowercase ? lower_ascii(raw) : std::string(raw);
  std::vector<int> pieces;
  std::size_t start = 0;
  while (start < word.size()) {
    std::size_t end = word.size();
    std::optional<int> found;
    while (end > start) {
      std::string candidate = word.substr(start, end - start);
      if (start > 0) candidate.insert(0, Vocab::kContinuation);
      if ((found = vocab.find(candidate))) break;
      --end;
      while (end > start && is_utf8_continuation(word[end])) --end;
    }
    if (!found || pieces.size() == options.max_pieces_per_word) return {vocab.unk_id()};
    pieces.push_back(*found);
    start = end;
  }
  if (pieces.empty()) return {vocab.unk_id()};
  return pieces;
}

TokenizedSentence tokenize_words(const std::vector<std::string>& words, const Vocab& vocab,
                                 const TokenizerOptions& options) {
  if (words.empty()) throw EmptySentenceError("cannot tokenize an empty sentence");
  TokenizedSentence out;
  out.words = words;
  out.subwords.push_back(vocab.cls_id());
  out.special_positions.push_back(0);
  for (const auto& w : words) {
    auto pieces = wordpiece(w, vocab, options);
    out.spans.push_back({out.subwords.size(), pieces.size()});
    out.subwords.insert(out.subwords.end(), pieces.begin(), pieces.end());
  }
  out.special_positions.push_back(out.subwords.size());
  out.subwords.push_back(vocab.sep_id());
  return out;
}

TokenizedSentence tokenize(std::string_view text, const Vocab& vocab,
                           const TokenizerOptions& options) {
  return tokenize_words(split_whitespace(text), vocab, options);
}

std::string detokenize_word(const TokenizedSentence& sentence, std::size_t word,
                            const Vocab& vocab) {
  const auto& span = sentence.spans.at(word);
  std::string out;
  for (std::size_t i = span.start; i < span.start + span.length; ++i) {
    std::string_view piece = vocab.token(sentence.subwords[i]);
    if (piece.starts_with(Vocab::kContinuation)) piece.remove_prefix(Vocab::kContinuation.size());
    out += piece;
  }
  return out;
}

std::size_t EncodedInput::padding() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 0));
}

namespace {

// Maps a sentence's word spans into the encoded sequence, clipped to the
// first `kept` body tokens. Body position p sits at encoded `offset + p`.
std::vector<WordSpan> place_spans(const TokenizedSentence& s, std::size_t kept,
                                  std::size_t offset) {
  std::vector<WordSpan> out;
  for (const auto& span : s.spans) {
    const std::size_t body = span.start - 1;
    if (body >= kept) break;
    out.push_back({offset + body, std::min(span.length, kept - body)});
  }
  return out;
}

}  // namespace

EncodedInput encode_pair(const TokenizedSentence& a, const TokenizedSentence* b,
                         std::size_t max_len, const Vocab& vocab) {
  if (max_len < 3) throw PreconditionError("encode_pair: max_len must be at least 3");
  const std::size_t body_a = a.subwords.size() - 2;
  const std::size_t body_b = b ? b->subwords.size() - 2 : 0;
  const std::size_t budget = max_len - (b ? 3 : 2);
  std::size_t la = body_a, lb = body_b;
  while (la + lb > budget) {
    if (la > lb) {
      --la;
    } else {
      --lb;
    }
  }

  EncodedInput enc;
  enc.has_b = b != nullptr;
  enc.ids.push_back(vocab.cls_id());
  enc.ids.insert(enc.ids.end(), a.subwords.begin() + 1, a.subwords.begin() + 1 + la);
  enc.spans_a = place_spans(a, la, 1);
  enc.sep_positions.push_back(enc.ids.size());
  enc.ids.push_back(vocab.sep_id());
  enc.segments.assign(enc.ids.size(), 0);
  if (b) {
    enc.spans_b = place_spans(*b, lb, enc.ids.size());
    enc.ids.insert(enc.ids.end(), b->subwords.begin() + 1, b->subwords.begin() + 1 + lb);
    enc.sep_positions.push_back(enc.ids.size());
    enc.ids.push_back(vocab.sep_id());
    enc.segments.resize(enc.ids.size(), 1);
  }
  enc.mask.assign(enc.ids.size(), 1);
  enc.ids.resize(max_len, vocab.pad_id());
  enc.segments.resize(max_len, 0);
  enc.mask.resize(max_len, 0);
  return enc;
}

}  // namespace sembert
