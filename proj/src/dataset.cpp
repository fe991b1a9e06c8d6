// SPDX-License-Identifier: Apache-2.0
#include "sembert/dataset.hpp"

#include <fstream>
#include <set>

#include "sembert/error.hpp"

namespace sembert {

namespace {

using nlohmann::json;

std::vector<std::string> read_words(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw ValidationError(std::string("\"") + key + "\" must be a list of words");
  std::vector<std::string> words;
  for (const auto& w : v) {
    if (!w.is_string() || w.get<std::string>().empty()) {
      throw ValidationError(std::string("\"") + key + "\" must hold non-empty strings");
    }
    words.push_back(w.get<std::string>());
  }
  return words;
}

SrlAnnotation read_frames(const json& j, const char* key, std::size_t n_words,
                          const LabelVocab& labels) {
  if (!j.contains(key)) return {};
  const auto& v = j.at(key);
  if (!v.is_array()) throw ValidationError(std::string("\"") + key + "\" must be a list of frames");
  std::vector<RawFrame> raw;
  for (const auto& f : v) {
    if (!f.is_object() || !f.contains("pred") || !f.contains("tags") ||
        !f.at("pred").is_number_integer() || !f.at("tags").is_array()) {
      throw ValidationError(std::string("\"") + key +
                            "\" frames need an integer \"pred\" and a \"tags\" list");
    }
    RawFrame r;
    r.pred = f.at("pred").get<int>();
    for (const auto& t : f.at("tags")) {
      if (!t.is_string()) throw ValidationError(std::string("\"") + key + "\" tags must be strings");
      r.tags.push_back(t.get<std::string>());
    }
    raw.push_back(std::move(r));
  }
  try {
    return load_annotation(raw, n_words, labels);
  } catch (const Error& e) {
    throw ValidationError(std::string(key) + ": " + e.what());
  }
}

json frames_to_json(const SrlAnnotation& ann, const LabelVocab& labels) {
  json out = json::array();
  for (const auto& f : ann.frames) {
    json tags = json::array();
    for (int l : f.labels) tags.push_back(labels.label(l));
    out.push_back({{"pred", f.predicate}, {"tags", tags}});
  }
  return out;
}

}  // namespace

std::vector<std::string> TaskExample::answer_texts() const {
  std::vector<std::string> out;
  for (const auto& a : answers) {
    std::string text;
    for (std::size_t i = a.start; i <= a.end && i < words_b.size(); ++i) {
      if (!text.empty()) text += ' ';
      text += words_b[i];
    }
    out.push_back(text);
  }
  return out;
}

TaskExample example_from_json(const json& j, const DatasetSchema& schema,
                              const LabelVocab& labels) {
  static const std::set<std::string> known = {"id",    "words_a", "words_b", "srl_a",
                                              "srl_b", "label",   "answers"};
  if (!j.is_object()) throw ValidationError("record must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ValidationError("unknown field \"" + key + "\"");
  }
  TaskExample ex;
  if (!j.contains("id") || !j.at("id").is_string()) {
    throw ValidationError("\"id\" must be a string");
  }
  ex.id = j.at("id").get<std::string>();
  if (!j.contains("words_a")) throw ValidationError("missing \"words_a\"");
  ex.words_a = read_words(j, "words_a");
  if (ex.words_a.empty()) throw ValidationError("\"words_a\" is empty");
  if (j.contains("words_b")) ex.words_b = read_words(j, "words_b");
  if (!j.contains("words_b") && j.contains("srl_b")) {
    throw ValidationError("\"srl_b\" given without \"words_b\"");
  }
  ex.srl_a = read_frames(j, "srl_a", ex.words_a.size(), labels);
  ex.srl_b = read_frames(j, "srl_b", ex.words_b.size(), labels);

  switch (schema.task_kind) {
    case TaskKind::Classification: {
      if (!j.contains("label") || !j.at("label").is_number_integer()) {
        throw ValidationError("\"label\" must be an integer class id");
      }
      const auto label = j.at("label").get<long long>();
      if (label < 0 || label >= static_cast<long long>(schema.num_labels)) {
        throw ValidationError("\"label\" " + std::to_string(label) + " outside [0, " +
                              std::to_string(schema.num_labels) + ")");
      }
      ex.label = static_cast<int>(label);
      break;
    }
    case TaskKind::Regression:
      if (!j.contains("label") || !j.at("label").is_number()) {
        throw ValidationError("\"label\" must be a number");
      }
      ex.score = j.at("label").get<double>();
      break;
    case TaskKind::Span: {
      if (ex.words_b.empty()) throw ValidationError("span records need a \"words_b\" passage");
      if (!j.contains("answers") || !j.at("answers").is_array()) {
        throw ValidationError("\"answers\" must be a list of [start, end] pairs");
      }
      for (const auto& a : j.at("answers")) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number_unsigned() ||
            !a[1].is_number_unsigned()) {
          throw ValidationError("each answer must be [start, end] with non-negative integers");
        }
        AnswerSpan span{a[0].get<std::size_t>(), a[1].get<std::size_t>()};
        if (span.start > span.end || span.end >= ex.words_b.size()) {
          throw ValidationError("answer [" + std::to_string(span.start) + ", " +
                                std::to_string(span.end) + "] is not a word range of a " +
                                std::to_string(ex.words_b.size()) + "-word passage");
        }
        ex.answers.push_back(span);
      }
      break;
    }
  }
  return ex;
}

nlohmann::ordered_json example_to_json(const TaskExample& ex, const DatasetSchema& schema,
                                       const LabelVocab& labels) {
  nlohmann::ordered_json j;
  j["id"] = ex.id;
  j["words_a"] = ex.words_a;
  if (ex.has_b()) j["words_b"] = ex.words_b;
  j["srl_a"] = frames_to_json(ex.srl_a, labels);
  if (ex.has_b()) j["srl_b"] = frames_to_json(ex.srl_b, labels);
  switch (schema.task_kind) {
    case TaskKind::Classification:
      j["label"] = ex.label;
      break;
    case TaskKind::Regression:
      j["label"] = ex.score;
      break;
    case TaskKind::Span: {
      json answers = json::array();
      for (const auto& a : ex.answers) answers.push_back({a.start, a.end});
      j["answers"] = answers;
      break;
    }
  }
  return j;
}

DatasetReport check_dataset(const std::filesystem::path& path, const DatasetSchema& schema,
                            const LabelVocab& labels) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset " + path.string());
  DatasetReport report;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      report.errors.push_back({line_no, std::string("malformed JSON: ") + e.what(), true});
      continue;
    }
    try {
      auto ex = example_from_json(j, schema, labels);
      if (!ids.insert(ex.id).second) {
        throw ValidationError("duplicate id \"" + ex.id + "\"");
      }
      report.examples.push_back(std::move(ex));
    } catch (const Error& e) {
      report.errors.push_back({line_no, e.what(), false});
    }
  }
  if (report.examples.empty() && report.errors.empty()) {
    report.warnings.push_back(path.string() + " holds no examples");
  }
  return report;
}

std::vector<TaskExample> load_dataset(const std::filesystem::path& path,
                                      const DatasetSchema& schema, const LabelVocab& labels,
                                      std::vector<std::string>* warnings) {
  auto report = check_dataset(path, schema, labels);
  if (!report.errors.empty()) {
    std::string msg = path.string() + ": " + std::to_string(report.errors.size()) +
                      " bad line(s)";
    bool malformed = false;
    for (const auto& e : report.errors) {
      msg += "\n  line " + std::to_string(e.line) + ": " + e.message;
      malformed = malformed || e.malformed_json;
    }
    if (malformed) throw ParseError(msg);
    throw ValidationError(msg);
  }
  if (warnings) warnings->insert(warnings->end(), report.warnings.begin(), report.warnings.end());
  return std::move(report.examples);
}

void save_dataset(const std::vector<TaskExample>& examples, const std::filesystem::path& path,
                  const DatasetSchema& schema, const LabelVocab& labels) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write dataset " + path.string());
  for (const auto& ex : examples) out << example_to_json(ex, schema, labels).dump() << '\n';
}

}  // namespace sembert
