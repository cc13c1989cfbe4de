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

#include "vfhe/ring.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "vfhe/error.hpp"

namespace vfhe {
namespace {

// O(N^2) negacyclic convolution modulo (X^N + 1, q).
std::vector<u64> schoolbook(std::span<const u64> a, std::span<const u64> b, u64 q) {
  const std::size_t n = a.size();
  std::vector<u64> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const u64 prod = static_cast<u64>(static_cast<u128>(a[i]) * b[j] % q);
      const std::size_t k = (i + j) % n;
      if (i + j < n) {
        out[k] = (out[k] + prod) % q;
      } else {
        out[k] = (out[k] + q - prod) % q;
      }
    }
  }
  return out;
}

RingElement uniform(const RingParamsPtr& p, Prng& prng) {
  return sample_poly(p, Distribution::uniform(), prng);
}

TEST(ModulusTest, BarrettMatchesDivision) {
  Prng prng(7);
  for (u64 q : std::vector<u64>{17, 257, 61937, (1ULL << 61) - 1, find_ntt_prime(62, 1 << 14)}) {
    Modulus m(q);
    for (int i = 0; i < 2000; ++i) {
      const u64 a = prng.uniform(q), b = prng.uniform(q);
      EXPECT_EQ(m.mul(a, b), static_cast<u64>(static_cast<u128>(a) * b % q));
    }
    EXPECT_EQ(m.mul(q - 1, q - 1), 1u);
  }
}

TEST(ModulusTest, NttPrimeSearch) {
  const u64 p = find_ntt_prime(45, 2 * 8192);
  EXPECT_TRUE(is_prime(p));
  EXPECT_EQ(p % (2 * 8192), 1u);
  EXPECT_EQ(std::bit_width(p), 45);
  EXPECT_THROW(Modulus(1ULL << 62), Error);
}

TEST(RingParamsTest, RejectsBadParameters) {
  EXPECT_THROW(RingParams::create(6, {257}), Error);
  EXPECT_THROW(RingParams::create(2, {257}), Error);
  EXPECT_THROW(RingParams::create(8, {251}), Error);   // prime, not 1 mod 16
  EXPECT_THROW(RingParams::create(8, {273}), Error);   // 1 mod 16, not prime
  EXPECT_THROW(RingParams::create(8, {257, 257}), Error);
  auto p = RingParams::create(8, {257, 241});
  EXPECT_EQ(p->q(), BigInt(61937));
}

TEST(RingAddTest, IdentityInverseAndSchoolbook) {
  auto p = RingParams::create(8, {257});
  Prng prng(1);
  for (int trial = 0; trial < 100; ++trial) {
    RingElement a = uniform(p, prng), b = uniform(p, prng);
    EXPECT_EQ(a + RingElement::zero(p), a);
    EXPECT_EQ(a + (-a), RingElement::zero(p));
    RingElement s = a + b;
    for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(s.limb(0)[j], (a.limb(0)[j] + b.limb(0)[j]) % 257);
  }
}

TEST(RingAddTest, MismatchIsStructuredError) {
  auto p = RingParams::create(8, {257});
  auto p2 = RingParams::create(8, {257, 241});
  RingElement a = RingElement::zero(p), b = RingElement::zero(p2);
  try {
    (void)(a + b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParamMismatch);
  }
  try {
    (void)(a + RingElement::zero(p, Form::kNtt));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFormMismatch);
  }
}

TEST(RingMulTest, IdentityAndWraparound) {
  auto p = RingParams::create(8, {257, 241});
  Prng prng(2);
  RingElement a = uniform(p, prng);
  RingElement one = RingElement::constant(p, 1);
  EXPECT_EQ(ring_mul(a.to_ntt(), one.to_ntt()), a.to_ntt());

  std::vector<std::int64_t> x(8, 0), x7(8, 0);
  x[1] = 1;
  x7[7] = 1;
  RingElement prod = ring_mul(RingElement::from_signed(p, x), RingElement::from_signed(p, x7));
  auto big = prod.to_big();
  EXPECT_EQ(big[0], p->q() - 1);
  for (std::size_t j = 1; j < 8; ++j) EXPECT_EQ(big[j], 0);
}

TEST(RingMulTest, MatchesSchoolbookRandomized) {
  Prng prng(3);
  for (std::size_t n : {8u, 16u, 32u, 64u}) {
    const u64 q = find_ntt_prime(20, 2 * n);
    auto params = RingParams::create(n, {q});
    for (int trial = 0; trial < 50; ++trial) {
      RingElement a = uniform(params, prng), b = uniform(params, prng);
      RingElement c = ntt_transform(ring_mul(a.to_ntt(), b.to_ntt()), Direction::kInverse);
      EXPECT_EQ(std::vector<u64>(c.limb(0).begin(), c.limb(0).end()), schoolbook(a.limb(0), b.limb(0), q));
    }
  }
}

TEST(RingMulTest, ExhaustiveMonomialsN4Q17) {
  // Bilinearity makes the monomial products an exhaustive check.
  auto p = RingParams::create(4, {17});
  for (u64 c1 = 0; c1 < 17; ++c1) {
    for (u64 c2 = 0; c2 < 17; ++c2) {
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          std::vector<std::vector<u64>> la(1, std::vector<u64>(4, 0)), lb = la;
          la[0][i] = c1;
          lb[0][j] = c2;
          auto a = RingElement::from_limbs(p, la, Form::kCoefficient);
          auto b = RingElement::from_limbs(p, lb, Form::kCoefficient);
          auto c = ring_mul(a, b);
          ASSERT_EQ(std::vector<u64>(c.limb(0).begin(), c.limb(0).end()), schoolbook(la[0], lb[0], 17));
        }
      }
    }
  }
}

TEST(RingMulTest, AlgebraicLaws) {
  auto p = RingParams::create(16, {97, 193});
  Prng prng(4);
  for (int trial = 0; trial < 100; ++trial) {
    RingElement a = uniform(p, prng).to_ntt(), b = uniform(p, prng).to_ntt(), c = uniform(p, prng).to_ntt();
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_TRUE((a * b + c).is_reduced());
  }
}

TEST(NttTest, ZeroConstantAndInverse) {
  auto p = RingParams::create(8, {257});
  EXPECT_EQ(ntt_transform(RingElement::zero(p), Direction::kForward), RingElement::zero(p, Form::kNtt));
  // The constant polynomial evaluates to itself at every root.
  RingElement c = ntt_transform(RingElement::constant(p, 42), Direction::kForward);
  for (u64 v : c.limb(0)) EXPECT_EQ(v, 42u);

  auto p2 = RingParams::create(8, {257, 241});
  Prng prng(5);
  for (int i = 0; i < 1000; ++i) {
    RingElement x = uniform(p2, prng);
    ASSERT_EQ(ntt_transform(ntt_transform(x, Direction::kForward), Direction::kInverse), x);
  }
  EXPECT_THROW(ntt_transform(RingElement::zero(p), Direction::kInverse), Error);
}

TEST(NttTest, SlotsAreEvaluationsAtOddRootPowers) {
  auto p = RingParams::create(8, {257});
  Prng prng(6);
  RingElement x = uniform(p, prng);
  RingElement slots = x.to_ntt();
  const Modulus& q = p->modulus(0);
  const u64 psi = p->ntt_tables(0).psi;
  for (std::size_t k = 0; k < 8; ++k) {
    const u64 root = q.pow(psi, 2 * bit_reverse(k, 3) + 1);
    u64 acc = 0;
    for (std::size_t j = 0; j < 8; ++j) acc = q.add(acc, q.mul(x.limb(0)[j], q.pow(root, j)));
    EXPECT_EQ(slots.limb(0)[k], acc);
  }
}

TEST(CrtTest, Examples) {
  auto p = RingParams::create(8, {257, 241});
  EXPECT_EQ(crt_split(*p, 0), (std::vector<u64>{0, 0}));
  EXPECT_EQ(crt_split(*p, 1), (std::vector<u64>{1, 1}));
  auto limbs = crt_split(*p, 30000);
  EXPECT_EQ(limbs, (std::vector<u64>{30000 % 257, 30000 % 241}));
  EXPECT_EQ(crt_merge(*p, limbs), BigInt(30000));
  EXPECT_THROW(crt_split(*p, 61937), Error);
  EXPECT_THROW(crt_split(*p, -1), Error);
}

TEST(CrtTest, RoundtripsBothWays) {
  auto p = RingParams::create(8, {find_ntt_prime(45, 16), find_ntt_prime(46, 16), find_ntt_prime(46, 16, 1)});
  Prng prng(8);
  for (int i = 0; i < 10000; ++i) {
    std::vector<u64> limbs;
    for (const auto& m : p->moduli()) limbs.push_back(prng.uniform(m.value()));
    BigInt x = crt_merge(*p, limbs);
    ASSERT_LT(x, p->q());
    ASSERT_EQ(crt_split(*p, x), limbs);
    ASSERT_EQ(crt_merge(*p, crt_split(*p, x)), x);
  }
}

TEST(SampleTest, DeterministicAndBounded) {
  auto p = RingParams::create(64, {find_ntt_prime(30, 128)});
  Seed seed = seed_from_u64(99);
  EXPECT_EQ(sample_poly(p, Distribution::ternary(), seed), sample_poly(p, Distribution::ternary(), seed));
  EXPECT_EQ(sample_poly(p, Distribution::uniform(), seed), sample_poly(p, Distribution::uniform(), seed));
  auto t = sample_poly(p, Distribution::ternary(), seed).to_centered();
  for (const auto& c : t) EXPECT_LE(abs(c), 1);
}

TEST(SampleTest, CenteredBinomialMeanWithinThreeSigma) {
  Prng prng(10);
  const std::size_t n = 100000;
  auto v = sample_small(n, Distribution::centered_binomial(8), prng);
  double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  // Var(CBD(k)) = k / 2.
  const double sigma = std::sqrt(8.0 / 2.0 / n);
  EXPECT_LT(std::abs(mean), 3 * sigma);
  for (auto c : v) ASSERT_LE(std::abs(c), 8);
}

TEST(SerializeTest, EnvelopeRoundtrip) {
  auto p = RingParams::create(8, {257, 241});
  Prng prng(11);
  RingElement x = uniform(p, prng).to_ntt();
  std::vector<std::uint8_t> bytes;
  write_ring_element(bytes, x);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "VFHE");
  EXPECT_EQ(bytes.size(), 4 + 1 + 4 + 4 + 2 * 8 + 1 + 2 * 8 * 8);
  std::size_t pos = 0;
  EXPECT_EQ(read_ring_element(bytes, pos), x);
  EXPECT_EQ(pos, bytes.size());
  bytes.back() = 0xff;  // residue above q
  pos = 0;
  EXPECT_THROW(read_ring_element(bytes, pos), Error);
}

}  // namespace
}  // namespace vfhe
