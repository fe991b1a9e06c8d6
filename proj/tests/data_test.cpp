// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "sembert/checkpoint.hpp"
#include "sembert/config.hpp"
#include "sembert/dataset.hpp"
#include "sembert/error.hpp"
#include "sembert/model.hpp"

namespace sembert {
namespace {

const std::filesystem::path kFixtures{SEMBERT_FIXTURE_DIR};

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "sembert_data_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

TEST(Config, DefaultsRoundTrip) {
  RunConfig c;
  c.stop_train_metric = 1.0;
  c.fusion_mode = FusionMode::SubwordAblation;
  c.seed = 123456789012345ULL;
  const auto back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.fusion_mode, FusionMode::SubwordAblation);
  ASSERT_TRUE(back.stop_train_metric.has_value());

  const auto path = scratch("config.json");
  save_config(c, path);
  EXPECT_EQ(config_to_json(load_config(path)), config_to_json(c));
}

TEST(Config, PartialJsonKeepsDefaults) {
  const auto c = config_from_json(nlohmann::json{{"m", 5}, {"task_kind", "span"}});
  EXPECT_EQ(c.m, 5u);
  EXPECT_EQ(c.task_kind, TaskKind::Span);
  EXPECT_EQ(c.d_srl, 10u);
  EXPECT_EQ(c.hidden, 10u);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(config_from_json(nlohmann::json{{"mm", 2}}), ValidationError);
  EXPECT_THROW(config_from_json(nlohmann::json{{"m", "three"}}), ValidationError);
  EXPECT_THROW(config_from_json(nlohmann::json{{"m", 0}}), ValidationError);
  EXPECT_THROW(config_from_json(nlohmann::json{{"learning_rate", -1.0}}), ValidationError);
  EXPECT_THROW(config_from_json(nlohmann::json{{"epochs", 0}}), ValidationError);
  EXPECT_THROW(config_from_json(nlohmann::json{{"epochs", RunConfig::kMaxEpochs + 1}}),
               ValidationError);
  EXPECT_THROW(config_from_json(nlohmann::json{{"d_enc", 10}, {"n_heads", 4}}), ValidationError);
  EXPECT_THROW(config_from_json(nlohmann::json::array()), ValidationError);

  const auto path = scratch("broken.json");
  std::ofstream(path) << "{\"m\": ";
  EXPECT_THROW(load_config(path), ParseError);
}

TEST(Dataset, LoadsFixture) {
  const auto labels = LabelVocab::standard();
  const auto data = load_dataset(kFixtures / "snli_64.jsonl", {}, labels);
  ASSERT_EQ(data.size(), 64u);
  for (const auto& ex : data) {
    EXPECT_TRUE(ex.has_b());
    EXPECT_EQ(ex.srl_a.frames.size(), 1u);
    EXPECT_GE(ex.label, 0);
    EXPECT_LT(ex.label, 3);
  }
}

TEST(Dataset, SpanAnswersAndRoundTrip) {
  const auto labels = LabelVocab::standard();
  const DatasetSchema schema{TaskKind::Span, 0};
  const auto data = load_dataset(kFixtures / "squad_dev_24.jsonl", schema, labels);
  ASSERT_EQ(data.size(), 24u);
  std::size_t unanswerable = 0;
  for (const auto& ex : data) {
    unanswerable += ex.answers.empty();
    for (const auto& a : ex.answers) {
      EXPECT_LE(a.start, a.end);
      EXPECT_LT(a.end, ex.words_b.size());
    }
  }
  EXPECT_EQ(unanswerable, 6u);

  const auto path = scratch("squad_copy.jsonl");
  save_dataset(data, path, schema, labels);
  const auto back = load_dataset(path, schema, labels);
  ASSERT_EQ(back.size(), data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(example_to_json(back[i], schema, labels), example_to_json(data[i], schema, labels));
  }
}

TEST(Dataset, ReportsEveryBadLine) {
  const auto labels = LabelVocab::standard();
  const auto report = check_dataset(kFixtures / "bad_records.jsonl", {}, labels);
  EXPECT_EQ(report.examples.size(), 2u);
  ASSERT_EQ(report.errors.size(), 4u);
  EXPECT_EQ(report.errors[0].line, 2u);
  EXPECT_EQ(report.errors[1].line, 3u);
  EXPECT_TRUE(report.errors[1].malformed_json);
  EXPECT_EQ(report.errors[2].line, 4u);
  EXPECT_EQ(report.errors[3].line, 6u);
  EXPECT_NE(report.errors[3].message.find("B-WHO"), std::string::npos);

  // A malformed line makes the whole load a parse failure.
  EXPECT_THROW(load_dataset(kFixtures / "bad_records.jsonl", {}, labels), ParseError);
}

TEST(Dataset, ValidationErrorListsLines) {
  const auto labels = LabelVocab::standard();
  const auto path = scratch("invalid.jsonl");
  std::ofstream(path) << R"({"id": "a", "words_a": ["x"], "label": 0})" << "\n"
                      << R"({"id": "a", "words_a": ["y"], "label": 1})" << "\n"
                      << R"({"id": "c", "words_a": [], "label": 1})" << "\n";
  try {
    load_dataset(path, {}, labels);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_EQ(msg.find("line 1"), std::string::npos) << msg;
  }
}

TEST(Dataset, EmptyFileWarns) {
  const auto labels = LabelVocab::standard();
  std::vector<std::string> warnings;
  const auto data = load_dataset(kFixtures / "empty.jsonl", {}, labels, &warnings);
  EXPECT_TRUE(data.empty());
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_THROW(load_dataset(kFixtures / "missing.jsonl", {}, labels), ValidationError);
}

TEST(Dataset, SchemaChecks) {
  const auto labels = LabelVocab::standard();
  const auto span_record = nlohmann::json::parse(
      R"({"id": "q", "words_a": ["who", "?"], "words_b": ["a", "dog"], "answers": [[0, 1]]})");
  EXPECT_NO_THROW(example_from_json(span_record, {TaskKind::Span, 0}, labels));
  auto reversed = span_record;
  reversed["answers"] = nlohmann::json::parse("[[1, 0]]");
  EXPECT_THROW(example_from_json(reversed, {TaskKind::Span, 0}, labels), ValidationError);
  auto outside = span_record;
  outside["answers"] = nlohmann::json::parse("[[0, 2]]");
  EXPECT_THROW(example_from_json(outside, {TaskKind::Span, 0}, labels), ValidationError);

  const nlohmann::json reg = {{"id", "r"}, {"words_a", {"x"}}, {"label", 3.25}};
  EXPECT_DOUBLE_EQ(example_from_json(reg, {TaskKind::Regression, 0}, labels).score, 3.25);
  auto extra = reg;
  extra["colour"] = "red";
  EXPECT_THROW(example_from_json(extra, {TaskKind::Regression, 0}, labels), ValidationError);
}

TEST(Checkpoint, RoundTripPreservesPredictions) {
  const auto labels = LabelVocab::standard();
  const auto data = load_dataset(kFixtures / "snli_dev_24.jsonl", {}, labels);
  RunConfig config;
  config.d_enc = 16;
  config.d_w = 16;
  config.d_ff = 24;
  config.seed = 5;
  const auto model = Model::create(config, resolve_vocab(config, {&data}), labels);
  const auto path = scratch("checkpoint.json");
  save_checkpoint(model, path);
  const auto loaded = load_checkpoint(path);

  EXPECT_EQ(config_to_json(loaded.config()), config_to_json(model.config()));
  EXPECT_EQ(loaded.vocab().entries(), model.vocab().entries());
  const auto a = model.all_params();
  const auto b = loaded.all_params();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    const auto va = a[i].tensor.values();
    const auto vb = b[i].tensor.values();
    ASSERT_EQ(va.size(), vb.size());
    for (std::size_t k = 0; k < va.size(); ++k) ASSERT_EQ(va[k], vb[k]) << a[i].name;
  }
  const auto ex = model.prepare(data[0]);
  EXPECT_EQ(model.predict(ex).label, loaded.predict(loaded.prepare(data[0])).label);
}

TEST(Checkpoint, RejectsTampering) {
  const auto path = scratch("tampered.json");
  std::ofstream(path) << R"({"format": "something-else", "version": 1})";
  EXPECT_THROW(load_checkpoint(path), ValidationError);
  std::ofstream(path) << "not json";
  EXPECT_THROW(load_checkpoint(path), ParseError);
}

}  // namespace
}  // namespace sembert
