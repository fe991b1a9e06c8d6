// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <set>

#include "sembert/error.hpp"
#include "sembert/model.hpp"
#include "sembert/num/tensor.hpp"

namespace sembert {
namespace {

RunConfig small_config() {
  RunConfig c;
  c.d_enc = 16;
  c.d_w = 16;
  c.d_ff = 24;
  c.n_heads = 2;
  c.seed = 3;
  return c;
}

TaskExample pair_example(const LabelVocab& v) {
  TaskExample ex;
  ex.id = "pair";
  ex.words_a = {"the", "dormitories", "sat"};
  ex.words_b = {"they", "sat"};
  ex.srl_a.frames.push_back({2, {v.id("B-ARG1"), v.id("I-ARG1"), v.verb_id()}});
  ex.srl_b.frames.push_back({1, {v.id("B-ARG0"), v.verb_id()}});
  ex.label = 2;
  return ex;
}

Model make_model(const RunConfig& c, const TaskExample& ex) {
  std::vector<TaskExample> data{ex};
  return Model::create(c, resolve_vocab(c, {&data}), LabelVocab::standard());
}

TEST(Prepare, PairLayoutAndFrames) {
  const auto v = LabelVocab::standard();
  const auto ex = pair_example(v);
  const auto model = make_model(small_config(), ex);
  const auto p = model.prepare(ex);
  // "dormitories" splits into three 4-character pieces.
  EXPECT_EQ(p.ids.size(), 1u + 5 + 1 + 2 + 1);
  EXPECT_EQ(p.mask, std::vector<int>(p.ids.size(), 1));
  ASSERT_EQ(p.word_spans.size(), 1u + 3 + 1 + 2 + 1);
  EXPECT_EQ(p.word_spans[2].start, 2u);
  EXPECT_EQ(p.word_spans[2].length, 3u);
  EXPECT_EQ(p.segments.back(), 1);

  ASSERT_EQ(p.frames.size(), 3u);
  const int o = v.outside_id();
  EXPECT_EQ(p.frames[0].predicate, 3);
  EXPECT_EQ(p.frames[0].labels, (std::vector<int>{o, v.id("B-ARG1"), v.id("I-ARG1"),
                                                  v.verb_id(), o, v.id("B-ARG0"), v.verb_id(),
                                                  o}));
  EXPECT_EQ(p.frames[2].predicate, -1);
  EXPECT_EQ(p.frames[2].labels, std::vector<int>(8, o));
}

TEST(Prepare, TruncationDropsFrameTail) {
  const auto v = LabelVocab::standard();
  auto c = small_config();
  c.max_len = 7;  // one piece short of the full sentence
  TaskExample ex = pair_example(v);
  ex.words_b.clear();
  ex.srl_b.frames.clear();
  ex.words_a.push_back("again");
  ex.srl_a.frames[0].labels.push_back(v.outside_id());
  const auto model = make_model(c, ex);
  const auto p = model.prepare(ex);
  EXPECT_EQ(p.ids.size(), 7u);
  // "again" no longer fits; its frame position is dropped with it.
  EXPECT_EQ(p.word_spans.size(), 1u + 3 + 1);
  EXPECT_EQ(p.frames[0].labels.size(), p.word_spans.size());
}

TEST(Prepare, SpanTargetsWordAndSubwordRows) {
  const auto v = LabelVocab::standard();
  TaskExample ex;
  ex.id = "q";
  ex.words_a = {"who", "sat"};
  ex.words_b = {"the", "dormitories", "sat", "firm"};
  ex.answers = {{1, 2}};
  auto c = small_config();
  c.task_kind = TaskKind::Span;
  {
    const auto model = make_model(c, ex);
    const auto p = model.prepare(ex);
    // Rows: [CLS] who sat [SEP] the dormitories sat firm [SEP].
    EXPECT_EQ(p.candidates, (std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1, 0}));
    EXPECT_EQ(p.start_target, 5);
    EXPECT_EQ(p.end_target, 6);
    EXPECT_EQ(p.row_word[4], 0);
    EXPECT_EQ(model.represent(p).rows(), 9u);
  }
  c.fusion_mode = FusionMode::SubwordAblation;
  {
    const auto model = make_model(c, ex);
    const auto p = model.prepare(ex);
    ASSERT_EQ(p.candidates.size(), p.ids.size());
    // "dormitories" covers subword rows 5..7 and "sat" row 8.
    EXPECT_EQ(p.start_target, 5);
    EXPECT_EQ(p.end_target, 8);
    EXPECT_EQ(p.row_word[7], 1);
    EXPECT_EQ(model.represent(p).rows(), p.ids.size());
  }
  ex.answers = {};
  const auto p = make_model(c, ex).prepare(ex);
  EXPECT_EQ(p.start_target, 0);
  EXPECT_EQ(p.end_target, 0);
}

TEST(Model, ParamSetsPerMode) {
  const auto v = LabelVocab::standard();
  const auto ex = pair_example(v);
  auto names = [](const num::ParamList& ps) {
    std::set<std::string> out;
    for (const auto& p : ps) out.insert(p.name);
    return out;
  };
  auto c = small_config();
  const auto sembert = make_model(c, ex);
  c.fusion_mode = FusionMode::Baseline;
  const auto baseline = make_model(c, ex);
  c.fusion_mode = FusionMode::SubwordAblation;
  const auto ablation = make_model(c, ex);

  const auto all = names(sembert.all_params());
  EXPECT_EQ(names(baseline.all_params()), all);
  EXPECT_EQ(names(sembert.params()), all);
  for (const auto& n : names(baseline.params())) {
    EXPECT_EQ(n.rfind("embedder.", 0), std::string::npos) << n;
  }
  const auto abl = names(ablation.params());
  EXPECT_TRUE(abl.count("embedder.label_table"));
  for (const auto& n : abl) {
    if (n.rfind("embedder.", 0) == 0) {
      EXPECT_EQ(n, "embedder.label_table");
    }
  }
  // Head width: d_w + d, d_w, and d_enc + m * d_srl respectively.
  EXPECT_EQ(sembert.head_width(), 26u);
  EXPECT_EQ(baseline.head_width(), 16u);
  EXPECT_EQ(ablation.head_width(), 46u);

  // Every parameter used by the configured mode gets a gradient.
  for (const Model* model : {&sembert, &baseline, &ablation}) {
    model->loss(model->prepare(ex)).backward();
    for (const auto& p : model->params()) EXPECT_TRUE(p.tensor.has_grad()) << p.name;
  }
}

TEST(Model, ProjectionWidthFollowsM) {
  const auto ex = pair_example(LabelVocab::standard());
  for (std::size_t m = 1; m <= 5; ++m) {
    auto c = small_config();
    c.m = m;
    const auto model = make_model(c, ex);
    EXPECT_EQ(model.embedder().w2.rows(), m * 2 * c.hidden);
    EXPECT_EQ(model.embedder().w2.cols(), c.d);
    // m beyond the number of annotated frames pads with empty frames.
    EXPECT_EQ(model.represent(model.prepare(ex)).cols(), c.d_w + c.d);
  }
}

TEST(Model, SameSeedSameParametersAcrossModes) {
  const auto ex = pair_example(LabelVocab::standard());
  auto c = small_config();
  const auto a = make_model(c, ex);
  c.fusion_mode = FusionMode::Baseline;
  const auto b = make_model(c, ex);
  const auto pa = a.all_params();
  const auto pb = b.all_params();
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i].name.rfind("head.", 0) == 0) continue;  // width depends on mode
    const auto va = pa[i].tensor.values();
    const auto vb = pb[i].tensor.values();
    EXPECT_TRUE(std::equal(va.begin(), va.end(), vb.begin(), vb.end())) << pa[i].name;
  }
}

TEST(Model, PredictRecordsNoGraph) {
  const auto ex = pair_example(LabelVocab::standard());
  const auto model = make_model(small_config(), ex);
  const auto p = model.prepare(ex);
  {
    num::NoGradScope guard;
    EXPECT_TRUE(num::NoGradScope::active());
    const auto h = model.represent(p);
    EXPECT_TRUE(h.node()->parents.empty());
    EXPECT_FALSE(h.requires_grad());
  }
  EXPECT_FALSE(num::NoGradScope::active());
  EXPECT_FALSE(model.represent(p).node()->parents.empty());
  const auto pred = model.predict(p);
  EXPECT_GE(pred.label, 0);
  EXPECT_LT(pred.label, 3);
}

}  // namespace
}  // namespace sembert
