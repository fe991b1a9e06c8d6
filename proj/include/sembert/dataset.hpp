// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sembert/heads.hpp"
#include "sembert/srl.hpp"

namespace sembert {

// Inclusive word range [start, end] inside words_b.
struct AnswerSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const AnswerSpan&) const = default;
};

struct TaskExample {
  std::string id;
  std::vector<std::string> words_a;
  // Empty for single-sentence tasks. For span tasks words_a is the question
  // and words_b the passage.
  std::vector<std::string> words_b;
  SrlAnnotation srl_a;
  SrlAnnotation srl_b;
  int label = 0;       // classification
  double score = 0.0;  // regression
  // Span tasks; empty means the question has no answer in the passage.
  std::vector<AnswerSpan> answers;

  bool has_b() const { return !words_b.empty(); }
  std::vector<std::string> answer_texts() const;
};

struct DatasetSchema {
  TaskKind task_kind = TaskKind::Classification;
  std::size_t num_labels = 3;
};

struct DatasetIssue {
  std::size_t line = 0;
  std::string message;
  bool malformed_json = false;
};

struct DatasetReport {
  std::vector<TaskExample> examples;
  std::vector<DatasetIssue> errors;
  std::vector<std::string> warnings;
};

// Field layout of one JSONL record:
//   "id": string, "words_a": [string], "words_b": [string] (optional),
//   "srl_a"/"srl_b": [{"pred": int, "tags": [string]}] (optional),
//   "label": int | number, "answers": [[start, end], ...].
TaskExample example_from_json(const nlohmann::json& j, const DatasetSchema& schema,
                              const LabelVocab& labels);
nlohmann::ordered_json example_to_json(const TaskExample& ex, const DatasetSchema& schema,
                                       const LabelVocab& labels);

// Reads every line and collects all problems without throwing on bad records.
DatasetReport check_dataset(const std::filesystem::path& path, const DatasetSchema& schema,
                            const LabelVocab& labels);

// All-or-nothing load. Throws ParseError (any malformed line) or
// ValidationError (schema violations) whose message lists every bad line.
std::vector<TaskExample> load_dataset(const std::filesystem::path& path,
                                      const DatasetSchema& schema, const LabelVocab& labels,
                                      std::vector<std::string>* warnings = nullptr);

void save_dataset(const std::vector<TaskExample>& examples, const std::filesystem::path& path,
                  const DatasetSchema& schema, const LabelVocab& labels);

}  // namespace sembert
