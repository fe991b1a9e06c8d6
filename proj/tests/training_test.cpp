// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "sembert/dataset.hpp"
#include "sembert/error.hpp"
#include "sembert/experiments.hpp"
#include "sembert/trainer.hpp"

namespace sembert {
namespace {

const std::filesystem::path kFixtures{SEMBERT_FIXTURE_DIR};

RunConfig tiny_config() {
  RunConfig c;
  c.d_enc = 16;
  c.d_w = 16;
  c.d_ff = 24;
  c.n_heads = 2;
  c.n_layers = 1;
  c.epochs = 2;
  c.batch_size = 8;
  c.seed = 11;
  return c;
}

struct Data {
  std::vector<TaskExample> train, dev;
};

const Data& nli() {
  static const Data d = [] {
    const auto labels = LabelVocab::standard();
    Data out;
    out.train = load_dataset(kFixtures / "snli_64.jsonl", {}, labels);
    out.dev = load_dataset(kFixtures / "snli_dev_24.jsonl", {}, labels);
    out.train.resize(24);
    return out;
  }();
  return d;
}

std::string log_text(const RunConfig& c) {
  std::string text;
  run_once(c, nli().train, nli().dev, [&](const std::string& run, const EpochLog& log) {
    text += run + " " + to_json(log).dump() + "\n";
  });
  return text;
}

TEST(Trainer, SameSeedSameLog) {
  const auto c = tiny_config();
  const auto a = log_text(c);
  EXPECT_EQ(a, log_text(c));
  auto other = c;
  other.seed = 12;
  EXPECT_NE(a, log_text(other));
}

TEST(Trainer, LogShapeAndSchedule) {
  auto c = tiny_config();
  c.epochs = 3;
  const auto out = run_once(c, nli().train, nli().dev);
  ASSERT_EQ(out.train.epochs.size(), 3u);
  EXPECT_EQ(out.train.steps, 3u * 3);  // 24 examples, batches of 8
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(out.train.epochs[i].epoch, i + 1);
    EXPECT_TRUE(out.train.epochs[i].dev_metric.has_value());
    EXPECT_TRUE(std::isfinite(out.train.epochs[i].loss));
  }
  // Kept parameters are those of the best dev epoch.
  double best = -1;
  std::size_t best_epoch = 0;
  for (const auto& e : out.train.epochs) {
    if (*e.dev_metric > best) {
      best = *e.dev_metric;
      best_epoch = e.epoch;
    }
  }
  EXPECT_EQ(out.train.kept_epoch, best_epoch);
  EXPECT_DOUBLE_EQ(out.metric, best);
}

TEST(Trainer, StopsEarlyAtTrainTarget) {
  auto c = tiny_config();
  c.epochs = 50;
  c.stop_train_metric = 0.0;
  const auto out = run_once(c, nli().train, {});
  EXPECT_TRUE(out.train.stopped_early);
  EXPECT_EQ(out.train.epochs.size(), 1u);
}

TEST(Trainer, DivergenceIsReported) {
  auto c = tiny_config();
  auto data = nli().train;
  auto model = Model::create(c, resolve_vocab(c, {&data}), LabelVocab::standard());
  auto prepared = prepare_all(model, data);
  // Poison one parameter so the first loss is not finite.
  for (auto& p : model.params()) {
    if (p.name.rfind("head.", 0) == 0) {
      for (double& x : p.tensor.data()) x = std::nan("");
    }
  }
  EXPECT_THROW(train(model, prepared, {}), DivergenceError);
}

TEST(Trainer, RegressionAndSpanTasksRun) {
  const auto labels = LabelVocab::standard();
  auto c = tiny_config();
  c.epochs = 1;
  c.task_kind = TaskKind::Regression;
  c.metric = MetricKind::Pearson;
  const auto sts = load_dataset(kFixtures / "sts_24.jsonl", {TaskKind::Regression, 0}, labels);
  const auto reg = run_once(c, sts, sts);
  EXPECT_TRUE(std::isfinite(reg.metric));

  c.task_kind = TaskKind::Span;
  const DatasetSchema span{TaskKind::Span, 0};
  const auto qa_train = load_dataset(kFixtures / "squad_train_48.jsonl", span, labels);
  const auto qa_dev = load_dataset(kFixtures / "squad_dev_24.jsonl", span, labels);
  const auto out = run_once(c, qa_train, qa_dev);
  EXPECT_GE(out.metric, 0.0);
  EXPECT_LE(out.metric, 1.0);
  const auto ev = evaluate(out.model, prepare_all(out.model, qa_dev));
  EXPECT_EQ(ev.predictions.size(), qa_dev.size());
  EXPECT_DOUBLE_EQ(ev.metric, out.metric);
}

TEST(Experiments, NoiseSweepZeroMatchesPlainRun) {
  const auto c = tiny_config();
  const auto rows = sweep_noise(c, nli().train, nli().dev, {0.0, 1.0});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].name, "p=0");
  EXPECT_DOUBLE_EQ(rows[0].value, 0.0);
  const auto plain = run_once(c, nli().train, nli().dev);
  EXPECT_DOUBLE_EQ(rows[0].dev_metric, plain.metric);
  EXPECT_EQ(rows[1].epochs_run, c.epochs);
}

TEST(Experiments, LabelNoiseKeepsShapes) {
  const auto labels = LabelVocab::standard();
  num::Rng rng(4);
  const auto noisy = with_label_noise(nli().train, 1.0, labels, rng);
  ASSERT_EQ(noisy.size(), nli().train.size());
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    const auto& a = nli().train[i].srl_a.frames[0].labels;
    const auto& b = noisy[i].srl_a.frames[0].labels;
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NE(a[k], b[k]);
    EXPECT_EQ(noisy[i].words_a, nli().train[i].words_a);
    EXPECT_EQ(noisy[i].label, nli().train[i].label);
  }
}

TEST(Experiments, SweepMAndAblateRows) {
  auto c = tiny_config();
  c.epochs = 1;
  const auto m_rows = sweep_m(c, nli().train, nli().dev);
  ASSERT_EQ(m_rows.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(m_rows[i].value, static_cast<double>(i + 1));
    EXPECT_GE(m_rows[i].dev_metric, 0.0);
    EXPECT_LE(m_rows[i].dev_metric, 1.0);
  }
  const auto ab = ablate(c, nli().train, nli().dev);
  ASSERT_EQ(ab.size(), 3u);
  EXPECT_EQ(ab[0].name, "baseline");
  EXPECT_EQ(ab[1].name, "subword_ablation");
  EXPECT_EQ(ab[2].name, "sembert");
  EXPECT_EQ(to_json(ab[2])["name"], "sembert");
}

}  // namespace
}  // namespace sembert
