// Copyright 2026 The vFHE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vfhe/encoding.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "vfhe/error.hpp"
#include "vfhe/modulus.hpp"

namespace vfhe::encoding {
namespace {

class EncodingTest : public ::testing::Test {
 protected:
  EncodingContextPtr ctx = EncodingContext::create(EncodingParams::desk());
  EncodingKey key = keygen(ctx, seed_from_u64(1));
  Prng prng{2};
  u64 next = 100;

  RingElement random_x() { return sample_poly(ctx->source_ring(), Distribution::uniform(), prng); }
  Encoding enc(const RingElement& x) { return encode(ctx, key, x, seed_from_u64(next++)); }
};

TEST(Params, Validation) {
  EXPECT_NO_THROW(EncodingContext::create(EncodingParams::desk()));
  EncodingParams p = EncodingParams::desk();
  p.source_modulus = 97;
  EXPECT_NO_THROW(EncodingContext::create(p));
  p.source_modulus = 251;  // prime, but not 1 mod 16
  EXPECT_THROW(EncodingContext::create(p), Error);
  p = EncodingParams::desk();
  p.target_moduli = {find_ntt_prime(20, 16)};
  EXPECT_THROW(EncodingContext::create(p), Error);
  p = EncodingParams::desk();
  p.target_moduli.push_back(257);
  EXPECT_THROW(EncodingContext::create(p), Error);
}

TEST(Params, BudgetBoundBelowDecodingThreshold) {
  auto ctx = EncodingContext::create(EncodingParams::desk());
  const BigInt t = ctx->params().source_modulus;
  const BigInt& Q = ctx->target_ring()->q();
  EXPECT_EQ(ctx->delta(), Q / t);
  EXPECT_EQ(BigInt(ctx->slack()), Q % t);
  EXPECT_LE(ctx->budget_noise_bound(), ctx->noise_limit());
  // The limit is the largest bound with 2t*B + 2r(t-1) < Q.
  const auto fits = [&](const BigInt& b) { return 2 * t * b + 2 * BigInt(ctx->slack()) * (t - 1) < Q; };
  EXPECT_TRUE(fits(ctx->noise_limit()));
  EXPECT_FALSE(fits(ctx->noise_limit() + 1));
}

TEST_F(EncodingTest, RoundTrip) {
  for (int i = 0; i < 1000; ++i) {
    const auto x = random_x();
    const auto e = enc(x);
    ASSERT_EQ(decode(ctx, key, e), x);
    EXPECT_LE(exact_noise(ctx, key, e), e.noise_bound);
  }
}

TEST_F(EncodingTest, Randomized) {
  const auto x = random_x();
  const auto e1 = enc(x), e2 = enc(x);
  EXPECT_FALSE(e1.a == e2.a && e1.b == e2.b);
  EXPECT_EQ(decode(ctx, key, e1), decode(ctx, key, e2));
}

TEST_F(EncodingTest, ZeroSurvivesBudgetOfSelfAdditions) {
  const auto zero = RingElement::zero(ctx->source_ring());
  const auto e = enc(zero);
  const std::vector<Encoding> copies(ctx->params().k_max, e);
  const std::vector<u64> ones(copies.size(), 1);
  const auto sum = linear_combine(ctx, copies, ones);
  EXPECT_EQ(decode(ctx, key, sum), zero);
  EXPECT_EQ(sum.consumed, ctx->params().k_max);
  EXPECT_LE(exact_noise(ctx, key, sum), sum.noise_bound);
}

TEST_F(EncodingTest, IdentityScalar) {
  const auto x = random_x();
  const auto e = enc(x);
  const std::vector<Encoding> one{e};
  const std::vector<u64> s{1};
  EXPECT_EQ(decode(ctx, key, linear_combine(ctx, one, s)), x);
}

TEST_F(EncodingTest, PairSums) {
  for (int i = 0; i < 1000; ++i) {
    const auto x1 = random_x(), x2 = random_x();
    const std::vector<Encoding> es{enc(x1), enc(x2)};
    const std::vector<u64> ones{1, 1};
    ASSERT_EQ(decode(ctx, key, linear_combine(ctx, es, ones)), x1 + x2);
  }
}

TEST_F(EncodingTest, BudgetBoundary) {
  const std::size_t k = ctx->params().k_max;
  const u64 t = ctx->params().source_modulus;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Encoding> es;
    std::vector<u64> cs;
    RingElement expected = RingElement::zero(ctx->source_ring());
    for (std::size_t j = 0; j < k; ++j) {
      const auto x = random_x();
      es.push_back(enc(x));
      cs.push_back(trial == 0 ? t - 1 : prng.uniform(t));
      expected += x.scalar_mul_u64(cs.back());
    }
    const auto combo = linear_combine(ctx, es, cs);
    ASSERT_EQ(decode(ctx, key, combo), expected);
    EXPECT_LE(exact_noise(ctx, key, combo), combo.noise_bound);
    EXPECT_LE(combo.noise_bound, ctx->budget_noise_bound());

    es.push_back(enc(random_x()));
    cs.push_back(1);
    try {
      linear_combine(ctx, es, cs);
      ADD_FAILURE() << "k_max + 1 accepted";
    } catch (const Error& err) {
      EXPECT_EQ(err.code(), ErrorCode::kBudgetExceeded);
    }
  }
}

TEST_F(EncodingTest, NestedCombinationsChargeTheLedger) {
  const auto x = random_x();
  const auto e = enc(x);
  const std::vector<Encoding> three(3, e);
  const std::vector<u64> c3{1, 2, 3};
  const auto s = linear_combine(ctx, three, c3);
  EXPECT_EQ(s.consumed, 3u);
  EXPECT_EQ(decode(ctx, key, s), x.scalar_mul_u64(6));
  const std::vector<Encoding> pair{s, s};
  const std::vector<u64> c2{1, 1};
  EXPECT_EQ(linear_combine(ctx, pair, c2).consumed, 6u);
  const std::vector<Encoding> over{s, s, s};
  const std::vector<u64> c3b{1, 1, 1};
  EXPECT_THROW(linear_combine(ctx, over, c3b), Error);
}

TEST_F(EncodingTest, InputErrors) {
  const auto e = enc(random_x());
  const std::vector<Encoding> one{e};
  const std::vector<u64> big{257};
  EXPECT_THROW(linear_combine(ctx, one, big), Error);
  const std::vector<u64> two{1, 1};
  EXPECT_THROW(linear_combine(ctx, one, two), Error);
  EXPECT_THROW(encode(ctx, key, random_x().to_ntt(), seed_from_u64(1)), Error);
  EXPECT_THROW(encode(ctx, key, RingElement::zero(ctx->target_ring()), seed_from_u64(1)), Error);
}

TEST_F(EncodingTest, SlotOrdering) {
  // Slot i of x is the plaintext polynomial evaluated at psi^(2 brv(i) + 1).
  const Modulus& q = ctx->source_ring()->modulus(0);
  const u64 psi = ctx->source_ring()->ntt_tables(0).psi;
  const std::size_t n = ctx->params().degree;
  const int log_n = static_cast<int>(std::log2(static_cast<double>(n)));
  ASSERT_EQ(q.pow(psi, n), q.value() - 1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_x();
    const auto m = slots_to_plaintext(ctx, x);
    for (std::size_t i = 0; i < n; ++i) {
      const u64 root = q.pow(psi, 2 * bit_reverse(i, log_n) + 1);
      u64 acc = 0;
      for (std::size_t j = n; j-- > 0;) acc = q.add(q.mul(acc, root), m.limb(0)[j]);
      EXPECT_EQ(acc, x.limb(0)[i]) << "slot " << i;
    }
    EXPECT_EQ(decode(ctx, key, enc(x)).limb(0)[3], x.limb(0)[3]);
  }
}

TEST_F(EncodingTest, PackedSizes) {
  const auto x = random_x();
  const auto e = enc(x);
  const auto p = pack_encoding(e);
  EXPECT_EQ(p.bits, 2u * 8 * 60);
  EXPECT_EQ(pack_source(x).bits, 8u * 9);
  const auto back = unpack_encoding(ctx, p);
  EXPECT_EQ(back.a, e.a);
  EXPECT_EQ(back.b, e.b);
  EXPECT_EQ(decode(ctx, key, back), x);
  EXPECT_EQ(back.consumed, ctx->params().k_max);
  Packed truncated = p;
  truncated.bits -= 1;
  EXPECT_THROW(unpack_encoding(ctx, truncated), Error);
}

TEST(Expansion, Formula) {
  EXPECT_DOUBLE_EQ(analytic_expansion(1, 2 * 30.0, 30.0), 2.0);
  EXPECT_DOUBLE_EQ(analytic_expansion(3, 120.0, 40.0), 9.0);
}

TEST(Expansion, DeskReport) {
  auto ctx = EncodingContext::create(EncodingParams::desk());
  const auto r = expansion_factor(ctx);
  const double log2_Q = std::log2(static_cast<double>(ctx->params().target_moduli[0])) +
                        std::log2(static_cast<double>(ctx->params().target_moduli[1]));
  EXPECT_DOUBLE_EQ(r.analytic, log2_Q / std::log2(257.0));
  EXPECT_DOUBLE_EQ(r.measured, 120.0 / 9.0);
  EXPECT_DOUBLE_EQ(r.improvement, 8.0);
  EXPECT_GT(r.pair_gap, 1.5);
  EXPECT_LT(r.pair_gap, 2.0);
}

TEST(Expansion, PaperScaleReport) {
  auto ctx = EncodingContext::create(EncodingParams::paper());
  const auto r = expansion_factor(ctx);
  EXPECT_NEAR(r.analytic, 180.0 / 45.0, 0.05);
  EXPECT_DOUBLE_EQ(r.improvement, 8192.0);
  EXPECT_NEAR(r.pair_gap, 2.0, 0.05);
}

}  // namespace
}  // namespace vfhe::encoding
