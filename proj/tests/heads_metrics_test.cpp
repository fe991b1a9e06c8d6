// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "sembert/error.hpp"
#include "sembert/heads.hpp"
#include "sembert/metrics.hpp"
#include "sembert/num/grad_check.hpp"
#include "support/oracles.hpp"
#include "support/tensor_helpers.hpp"

namespace sembert {
namespace {

using num::Tensor;
using testing::random_param;
using testing::vals;

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Classify, ZeroWeightsGiveUniformLogits) {
  num::Rng rng(1);
  auto h = random_param({4, 6}, rng);
  HeadParams head{Tensor::zeros({6, 3}), Tensor::zeros({3})};
  EXPECT_EQ(vals(classify(h, head)), (std::vector<double>{0, 0, 0}));
}

TEST(Classify, ArityPerTask) {
  num::Rng rng(2);
  auto h = random_param({3, 5}, rng);
  EXPECT_EQ(classify(h, HeadParams::init(TaskKind::Classification, 5, 2, rng)).size(), 2u);
  EXPECT_EQ(classify(h, HeadParams::init(TaskKind::Classification, 5, 3, rng)).size(), 3u);
  EXPECT_EQ(classify(h, HeadParams::init(TaskKind::Regression, 5, 0, rng)).size(), 1u);
  auto span = span_logits(h, HeadParams::init(TaskKind::Span, 5, 0, rng));
  EXPECT_EQ(span.start.shape(), (num::Shape{1, 3}));
  EXPECT_EQ(span.end.shape(), (num::Shape{1, 3}));
  EXPECT_THROW(HeadParams::init(TaskKind::Classification, 5, 1, rng), RangeError);
}

TEST(Classify, UsesOnlyFirstRow) {
  num::Rng rng(3);
  auto h = random_param({3, 4}, rng);
  auto head = HeadParams::init(TaskKind::Classification, 4, 2, rng);
  auto base = vals(classify(h, head));
  auto data = vals(h);
  for (std::size_t i = 4; i < data.size(); ++i) data[i] += 1.0;
  EXPECT_EQ(vals(classify(Tensor::from({3, 4}, data), head)), base);
}

TEST(Heads, GradientCheck) {
  num::Rng rng(4);
  auto h = random_param({5, 4}, rng);
  auto cls = HeadParams::init(TaskKind::Classification, 4, 3, rng);
  cls.b = random_param({3}, rng, 0.2);
  std::vector<int> target{2};
  auto r1 = num::grad_check([&] { return num::cross_entropy(classify(h, cls), target); },
                            {h, cls.w, cls.b});
  EXPECT_LT(r1.max_rel_error, 1e-4) << r1.worst;

  auto reg = HeadParams::init(TaskKind::Regression, 4, 0, rng);
  std::vector<double> gold{0.7};
  auto r2 = num::grad_check([&] { return num::mse(classify(h, reg), gold); }, {h, reg.w, reg.b});
  EXPECT_LT(r2.max_rel_error, 1e-4) << r2.worst;

  auto span = HeadParams::init(TaskKind::Span, 4, 0, rng);
  std::vector<int> allowed{1, 0, 1, 1, 1};
  auto r3 = num::grad_check([&] { return span_loss(span_logits(h, span), allowed, 2, 3); },
                            {h, span.w, span.b});
  EXPECT_LT(r3.max_rel_error, 1e-4) << r3.worst;
}

TEST(DecodeSpan, InfiniteThresholds) {
  std::vector<double> s{0.1, 2.0, 0.3, -1.0, 0.5}, e{0.2, -0.5, 0.1, 0.4, 3.0};
  std::vector<int> cand{0, 1, 1, 1, 1};
  EXPECT_TRUE(decode_span(s, e, cand, kInf, 30).is_null);
  auto p = decode_span(s, e, cand, -kInf, 30);
  EXPECT_FALSE(p.is_null);
  EXPECT_EQ(p.start, 1u);
  EXPECT_EQ(p.end, 4u);
  auto capped = decode_span(s, e, cand, -kInf, 2);
  EXPECT_LT(capped.end - capped.start, 2u);
}

TEST(DecodeSpan, BestSpanAtTwoFour) {
  std::vector<double> s{0, -2, 4, -2, -2, -2}, e{0, -2, -2, -2, 4, -2};
  std::vector<int> cand{0, 1, 1, 1, 1, 1};
  auto p = decode_span(s, e, cand, -kInf, 30);
  EXPECT_EQ(p.start, 2u);
  EXPECT_EQ(p.end, 4u);
}

TEST(DecodeSpan, AllMaskedIsAnError) {
  std::vector<double> s{1, 2}, e{1, 2};
  std::vector<int> cand{1, 0};
  EXPECT_THROW(decode_span(s, e, cand, 0.0, 30), DecodeError);
}

TEST(DecodeSpan, MatchesBruteForce) {
  num::Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(23);
    std::vector<double> s(n), e(n);
    std::vector<int> cand(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = rng.uniform(-4, 4);
      e[i] = rng.uniform(-4, 4);
      if (i > 0) cand[i] = rng.bernoulli(0.8) ? 1 : 0;
    }
    cand[1 + rng.below(n - 1)] = 1;
    const std::size_t max_len = 1 + rng.below(8);
    for (double tau : {-5.0, -0.3, 0.0, 0.3, 5.0}) {
      auto got = decode_span(s, e, cand, tau, max_len);
      auto want = testing::brute_force_span(s, e, cand, tau, max_len);
      ASSERT_EQ(got.is_null, want.is_null) << trial;
      EXPECT_EQ(got.start, want.start);
      EXPECT_EQ(got.end, want.end);
      EXPECT_NEAR(got.null_score, want.null_score, 1e-12);
      if (!got.is_null) {
        EXPECT_LE(got.start, got.end);
        EXPECT_LT(got.end - got.start, max_len);
      }
    }
  }
}

TEST(DecodeSpan, ShiftInvariant) {
  num::Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng.below(10);
    std::vector<double> s(n), e(n);
    std::vector<int> cand(n, 1);
    cand[0] = 0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = rng.uniform(-3, 3);
      e[i] = rng.uniform(-3, 3);
    }
    const double tau = rng.uniform(-0.5, 0.5);
    auto a = decode_span(s, e, cand, tau, 5);
    const double cs = rng.uniform(-10, 10), ce = rng.uniform(-10, 10);
    for (auto& x : s) x += cs;
    for (auto& x : e) x += ce;
    auto b = decode_span(s, e, cand, tau, 5);
    EXPECT_EQ(a.is_null, b.is_null);
    EXPECT_EQ(a.start, b.start);
    EXPECT_EQ(a.end, b.end);
  }
}

TEST(TuneThreshold, AllAnswerableAndCorrectPicksLowestSentinel) {
  std::vector<ThresholdCandidate> dev{{0.3, 1, 0}, {-0.2, 1, 0}, {0.9, 1, 0}};
  auto t = tune_threshold(dev);
  EXPECT_EQ(t.tau, threshold_grid(dev).front());
  EXPECT_LT(t.tau, -0.2);
  EXPECT_DOUBLE_EQ(t.f1, 1.0);
}

TEST(TuneThreshold, AllUnanswerablePicksHighestSentinel) {
  std::vector<ThresholdCandidate> dev{{0.3, 0, 1}, {-0.2, 0, 1}, {0.9, 0, 1}};
  auto t = tune_threshold(dev);
  EXPECT_EQ(t.tau, threshold_grid(dev).back());
  EXPECT_GT(t.tau, 0.9);
  EXPECT_DOUBLE_EQ(t.f1, 1.0);
  EXPECT_TRUE(std::isfinite(t.tau));
}

TEST(TuneThreshold, GridOptimalAndTiesGoUp) {
  num::Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ThresholdCandidate> dev;
    for (int i = 0; i < 40; ++i) {
      const bool answerable = rng.bernoulli(0.5);
      const double margin = std::round(rng.uniform(-3, 3) * 4) / 4;
      dev.push_back({margin, answerable ? rng.uniform() : 0.0, answerable ? 0.0 : 1.0});
    }
    auto t = tune_threshold(dev);
    EXPECT_EQ(t.f1, threshold_f1(dev, t.tau));
    for (double g : threshold_grid(dev)) {
      const double f = threshold_f1(dev, g);
      EXPECT_LE(f, t.f1 + 1e-12);
      if (g > t.tau) {
        EXPECT_LT(f, t.f1 - 1e-12) << "larger tau ties";
      }
    }
  }
  EXPECT_THROW(tune_threshold(std::vector<ThresholdCandidate>{}), PreconditionError);
}

TEST(Squad, PartialNumberPhrase) {
  std::vector<std::string> gold{"over 17.5 million"};
  auto same = squad_em_f1("over 17.5 million", gold);
  EXPECT_EQ(same.em, 1.0);
  EXPECT_EQ(same.f1, 1.0);
  auto partial = squad_em_f1("17.5 million", gold);
  EXPECT_EQ(partial.em, 0.0);
  EXPECT_NEAR(partial.f1, 0.8, 1e-15);
}

TEST(Squad, NullAnswers) {
  std::vector<std::string> none;
  std::vector<std::string> gold{"Denver Broncos"};
  EXPECT_EQ(squad_em_f1("", none).em, 1.0);
  EXPECT_EQ(squad_em_f1("", none).f1, 1.0);
  EXPECT_EQ(squad_em_f1("Broncos", none).f1, 0.0);
  EXPECT_EQ(squad_em_f1("", gold).f1, 0.0);
}

TEST(Squad, NormalizationAndGoldOrder) {
  EXPECT_EQ(normalize_answer("The  Denver, Broncos!"), "denver broncos");
  EXPECT_EQ(normalize_answer("an apple a day"), "apple day");
  std::vector<std::string> g1{"Denver Broncos", "the Broncos"}, g2{"the Broncos", "Denver Broncos"};
  for (const char* pred : {"broncos", "Denver", "Carolina Panthers", "THE DENVER BRONCOS."}) {
    auto a = squad_em_f1(pred, g1), b = squad_em_f1(pred, g2);
    EXPECT_EQ(a.em, b.em);
    EXPECT_EQ(a.f1, b.f1);
  }
  EXPECT_EQ(squad_em_f1("THE DENVER BRONCOS.", g1).em, 1.0);
  EXPECT_EQ(squad_em_f1("broncos", g1).em, 1.0);
}

TEST(Metrics, SixElementFixture) {
  std::vector<int> p{1, 0, 1, 1, 0, 1}, g{1, 0, 0, 1, 1, 1};
  EXPECT_DOUBLE_EQ(accuracy(p, g), 4.0 / 6.0);
  // tp 3, fp 1, fn 1, tn 1
  EXPECT_DOUBLE_EQ(f1_binary(p, g), 0.75);
  EXPECT_DOUBLE_EQ(matthews(p, g), 0.25);
  std::vector<double> x{1, 2, 3, 4, 5, 6}, y{2, 1, 4, 3, 6, 5};
  EXPECT_NEAR(pearson(x, y), 29.0 / 35.0, 1e-15);
}

TEST(Metrics, PerfectAndAntiPerfect) {
  std::vector<int> g{0, 1, 1, 0, 1};
  std::vector<int> anti{1, 0, 0, 1, 0};
  EXPECT_EQ(accuracy(g, g), 1.0);
  EXPECT_EQ(f1_binary(g, g), 1.0);
  EXPECT_DOUBLE_EQ(matthews(g, g), 1.0);
  EXPECT_DOUBLE_EQ(matthews(anti, g), -1.0);
  std::vector<double> x{0.5, 1.5, 2.0, 7.0};
  EXPECT_DOUBLE_EQ(pearson(x, x), 1.0);
}

TEST(Metrics, DegenerateInputs) {
  std::vector<int> ones(4, 1), g{0, 1, 1, 0};
  EXPECT_EQ(matthews(ones, g), 0.0);
  std::vector<double> flat{2, 2, 2}, y{1, 2, 3};
  EXPECT_THROW(pearson(flat, y), DegenerateInputError);
  std::vector<double> one{1};
  EXPECT_THROW(pearson(one, one), PreconditionError);
}

TEST(Metrics, KindDispatch) {
  for (auto k : {MetricKind::Accuracy, MetricKind::F1Binary, MetricKind::Matthews,
                 MetricKind::Pearson}) {
    EXPECT_EQ(parse_metric_kind(to_string(k)), k);
  }
  std::vector<double> p{1, 0, 1, 1, 0, 1}, g{1, 0, 0, 1, 1, 1};
  EXPECT_DOUBLE_EQ(metric(MetricKind::Matthews, p, g), 0.25);
  EXPECT_EQ(parse_task_kind(to_string(TaskKind::Span)), TaskKind::Span);
}

}  // namespace
}  // namespace sembert
