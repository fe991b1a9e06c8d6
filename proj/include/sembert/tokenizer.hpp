// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sembert {

// Wordpiece vocabulary. Line number in the vocab file is the token id;
// continuation pieces carry a literal "##" prefix.
class Vocab {
 public:
  static constexpr std::string_view kPad = "[PAD]";
  static constexpr std::string_view kUnk = "[UNK]";
  static constexpr std::string_view kCls = "[CLS]";
  static constexpr std::string_view kSep = "[SEP]";
  static constexpr std::string_view kContinuation = "##";

  explicit Vocab(std::vector<std::string> entries);

  static Vocab load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  // Vocabulary that splits every word into chunks of at most `piece_chars`
  // characters (first chunk bare, the rest "##"-prefixed). Greedy
  // longest-match segmentation reproduces exactly those chunks.
  static Vocab from_words(const std::vector<std::string>& words, std::size_t piece_chars = 4,
                          bool lowercase = true);

  std::size_t size() const { return entries_.size(); }
  std::optional<int> find(std::string_view token) const;
  const std::string& token(int id) const;
  const std::vector<std::string>& entries() const { return entries_; }

  int pad_id() const { return 0; }
  int unk_id() const { return unk_; }
  int cls_id() const { return cls_; }
  int sep_id() const { return sep_; }

 private:
  std::vector<std::string> entries_;
  std::unordered_map<std::string, int> index_;
  int unk_ = -1;
  int cls_ = -1;
  int sep_ = -1;
};

// Half-open run of subword positions [start, start + length).
struct WordSpan {
  std::size_t start = 0;
  std::size_t length = 0;
  bool operator==(const WordSpan&) const = default;
};

struct TokenizedSentence {
  std::vector<std::string> words;
  // Token ids, starting with [CLS] and ending with [SEP].
  std::vector<int> subwords;
  // One span per word into `subwords`; specials belong to no span.
  std::vector<WordSpan> spans;
  std::vector<std::size_t> special_positions;
};

struct TokenizerOptions {
  bool lowercase = true;
  // Words needing more pieces than this become [UNK].
  std::size_t max_pieces_per_word = 32;
};

// Greedy longest-match-first segmentation of one word. Returns a single
// [UNK] when the word has no complete segmentation.
std::vector<int> wordpiece(std::string_view word, const Vocab& vocab,
                           const TokenizerOptions& options = {});

// Splits `text` on whitespace and segments each word.
TokenizedSentence tokenize(std::string_view text, const Vocab& vocab,
                           const TokenizerOptions& options = {});
TokenizedSentence tokenize_words(const std::vector<std::string>& words, const Vocab& vocab,
                                 const TokenizerOptions& options = {});

// Inverse of segmentation for one word: pieces joined with "##" stripped.
std::string detokenize_word(const TokenizedSentence& sentence, std::size_t word,
                            const Vocab& vocab);

struct EncodedInput {
  std::vector<int> ids;
  std::vector<int> segments;
  std::vector<int> mask;
  // Spans of the surviving words of each segment, as positions in `ids`.
  // Truncation can shorten the last spans or drop trailing words entirely.
  std::vector<WordSpan> spans_a;
  std::vector<WordSpan> spans_b;
  std::size_t cls_position = 0;
  std::vector<std::size_t> sep_positions;
  bool has_b = false;
  std::size_t real_length() const { return ids.size() - padding(); }
  std::size_t padding() const;
};

// [CLS] a [SEP] (b [SEP]), truncated longest-first to max_len and padded
// with [PAD]. Segment ids are 0 for the first part and 1 for the second.
EncodedInput encode_pair(const TokenizedSentence& a, const TokenizedSentence* b,
                         std::size_t max_len, const Vocab& vocab);

}  // namespace sembert
