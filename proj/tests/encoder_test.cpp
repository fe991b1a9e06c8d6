// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "sembert/encoder.hpp"
#include "sembert/error.hpp"
#include "sembert/num/grad_check.hpp"
#include "support/tensor_helpers.hpp"

namespace sembert {
namespace {

using num::Tensor;
using testing::project;
using testing::vals;

EncoderConfig small_config() {
  EncoderConfig c;
  c.vocab_size = 20;
  c.d_enc = 8;
  c.n_layers = 2;
  c.n_heads = 2;
  c.d_ff = 12;
  c.max_positions = 16;
  return c;
}

TEST(Encoder, ConfigValidation) {
  auto c = small_config();
  c.n_heads = 3;
  EXPECT_THROW(c.validate(), ValidationError);
  c = small_config();
  c.vocab_size = 0;
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Encoder, OutputShapeAndLengthLimit) {
  num::Rng rng(1);
  auto p = EncoderParams::init(small_config(), rng);
  std::vector<int> ids{2, 5, 7, 3}, seg{0, 0, 1, 1}, mask{1, 1, 1, 1};
  EXPECT_EQ(encode(ids, seg, mask, p).shape(), (num::Shape{4, 8}));
  std::vector<int> long_ids(17, 1), zeros(17, 0), ones(17, 1);
  EXPECT_THROW(encode(long_ids, zeros, ones, p), LengthError);
  std::vector<int> short_mask{1, 1};
  EXPECT_THROW(encode(ids, seg, short_mask, p), DimensionError);
}

TEST(Encoder, MaskedPositionDoesNotLeak) {
  num::Rng rng(2);
  auto p = EncoderParams::init(small_config(), rng);
  std::vector<int> ids{2, 5, 7, 3, 9}, seg{0, 0, 0, 1, 1}, mask{1, 1, 0, 1, 1};
  auto base = vals(encode(ids, seg, mask, p));
  for (int replacement : {0, 11, 19}) {
    ids[2] = replacement;
    auto other = vals(encode(ids, seg, mask, p));
    for (std::size_t r : {0u, 1u, 3u, 4u}) {
      for (std::size_t c = 0; c < 8; ++c) EXPECT_EQ(other[r * 8 + c], base[r * 8 + c]);
    }
  }
}

TEST(Encoder, NoLayersReturnsSummedEmbeddings) {
  num::Rng rng(3);
  auto c = small_config();
  c.n_layers = 0;
  c.embedding_layer_norm = false;
  auto p = EncoderParams::init(c, rng);
  std::vector<int> ids{4, 1}, seg{0, 1}, mask{1, 1};
  auto out = vals(encode(ids, seg, mask, p));
  auto tok = vals(p.token_embedding), pos = vals(p.position_embedding),
       segs = vals(p.segment_embedding);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t d = 0; d < 8; ++d) {
      const double expect = tok[static_cast<std::size_t>(ids[i]) * 8 + d] + pos[i * 8 + d] +
                            segs[static_cast<std::size_t>(seg[i]) * 8 + d];
      EXPECT_NEAR(out[i * 8 + d], expect, 1e-15);
    }
  }
}

TEST(Encoder, AttentionRowsAreDistributions) {
  num::Rng rng(4);
  auto p = EncoderParams::init(small_config(), rng);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(10);
    std::vector<int> ids(n), seg(n, 0), mask(n, 1);
    for (auto& id : ids) id = static_cast<int>(rng.below(20));
    for (std::size_t i = 1; i < n; ++i) mask[i] = rng.bernoulli(0.7) ? 1 : 0;
    std::vector<Tensor> attention;
    encode(ids, seg, mask, p, &attention);
    ASSERT_EQ(attention.size(), 4u);
    for (const auto& a : attention) {
      auto v = vals(a);
      for (std::size_t r = 0; r < n; ++r) {
        double total = 0;
        for (std::size_t c = 0; c < n; ++c) {
          EXPECT_GE(v[r * n + c], 0.0);
          if (!mask[c]) {
            EXPECT_EQ(v[r * n + c], 0.0);
          }
          total += v[r * n + c];
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
      }
    }
  }
}

TEST(Encoder, ExamplesAreIndependentOfCallOrder) {
  num::Rng rng(5);
  auto p = EncoderParams::init(small_config(), rng);
  std::vector<int> a{2, 3, 4}, b{5, 6, 7, 8}, sa(3, 0), sb(4, 0), ma(3, 1), mb(4, 1);
  auto a1 = vals(encode(a, sa, ma, p));
  auto b1 = vals(encode(b, sb, mb, p));
  auto b2 = vals(encode(b, sb, mb, p));
  auto a2 = vals(encode(a, sa, ma, p));
  EXPECT_EQ(a1, a2);
  EXPECT_EQ(b1, b2);
}

TEST(Encoder, SameSeedSameParameters) {
  num::Rng r1(6), r2(6);
  auto p1 = EncoderParams::init(small_config(), r1);
  auto p2 = EncoderParams::init(small_config(), r2);
  num::ParamList l1, l2;
  p1.append_to(l1, "enc");
  p2.append_to(l2, "enc");
  EXPECT_EQ(num::snapshot(l1), num::snapshot(l2));
}

TEST(Encoder, GradientCheck) {
  num::Rng rng(7);
  auto c = small_config();
  c.d_enc = 4;
  c.d_ff = 6;
  auto p = EncoderParams::init(c, rng);
  std::vector<int> ids{2, 5, 7, 3, 0}, seg{0, 0, 1, 1, 0}, mask{1, 1, 1, 1, 0};
  num::ParamList params;
  p.append_to(params, "enc");
  std::vector<Tensor> tensors;
  for (auto& np : params) tensors.push_back(np.tensor);
  auto loss = [&] { return project(encode(ids, seg, mask, p)); };
  auto r = num::grad_check(loss, tensors, {1e-5, 400, 3});
  EXPECT_LT(r.max_rel_error, 1e-4) << r.worst;
}

}  // namespace
}  // namespace sembert
