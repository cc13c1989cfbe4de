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

#include <cmath>

#include "vfhe/error.hpp"
#include "vfhe/modulus.hpp"

namespace vfhe::encoding {
namespace {

BigInt combined_noise(const EncodingContext& ctx, std::span<const Encoding> encs,
                      std::span<const u64> scalars) {
  // sum c_j (Delta m_j + v_j) = Delta [sum c_j m_j]_t - r K + sum c_j v_j,
  // K = floor(sum c_j m_j / t) <= floor(sum c_j (t-1) / t).
  const u64 t = ctx.params().source_modulus;
  BigInt noise = 0, weight = 0;
  for (std::size_t j = 0; j < encs.size(); ++j) {
    noise += BigInt(scalars[j]) * encs[j].noise_bound;
    weight += scalars[j];
  }
  return noise + BigInt(ctx.slack()) * (weight * (t - 1) / t);
}

class BitWriter {
 public:
  void put(u64 v, int bits) {
    for (int i = 0; i < bits; ++i) {
      if (n_ % 8 == 0) bytes_.push_back(0);
      if ((v >> i) & 1) bytes_.back() |= static_cast<std::uint8_t>(1u << (n_ % 8));
      ++n_;
    }
  }
  Packed finish() { return {std::move(bytes_), n_}; }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t n_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const Packed& p) : p_(p) {}
  u64 get(int bits) {
    if (pos_ + bits > p_.bits || p_.bytes.size() * 8 < p_.bits) throw Error(ErrorCode::kMalformed, "packed data truncated");
    u64 v = 0;
    for (int i = 0; i < bits; ++i, ++pos_) v |= static_cast<u64>((p_.bytes[pos_ / 8] >> (pos_ % 8)) & 1) << i;
    return v;
  }
  bool done() const { return pos_ == p_.bits; }

 private:
  const Packed& p_;
  std::size_t pos_ = 0;
};

void pack_element(BitWriter& w, const RingElement& x) {
  for (std::size_t j = 0; j < x.num_limbs(); ++j) {
    const int bits = x.params().modulus(j).bits();
    for (u64 v : x.limb(j)) w.put(v, bits);
  }
}

RingElement unpack_element(BitReader& r, const RingParamsPtr& ring, Form form) {
  std::vector<std::vector<u64>> limbs(ring->num_limbs(), std::vector<u64>(ring->degree()));
  for (std::size_t j = 0; j < limbs.size(); ++j) {
    const Modulus& q = ring->modulus(j);
    for (auto& v : limbs[j]) {
      v = r.get(q.bits());
      if (v >= q.value()) throw Error(ErrorCode::kMalformed, "residue out of range");
    }
  }
  return RingElement::from_limbs(ring, std::move(limbs), form);
}

}  // namespace

EncodingParams EncodingParams::desk() {
  EncodingParams p;
  p.target_moduli = {find_ntt_prime(30, 16), find_ntt_prime(30, 16, 1)};
  return p;
}

EncodingParams EncodingParams::paper() {
  EncodingParams p;
  p.degree = 8192;
  p.source_modulus = find_ntt_prime(45, 2 * p.degree);
  p.target_moduli = {find_ntt_prime(60, 2 * p.degree), find_ntt_prime(60, 2 * p.degree, 1),
                     find_ntt_prime(60, 2 * p.degree, 2)};
  p.k_max = 64;
  p.error = Distribution::centered_binomial(21);
  return p;
}

EncodingContextPtr EncodingContext::create(const EncodingParams& params) {
  auto ctx = std::shared_ptr<EncodingContext>(new EncodingContext());
  ctx->params_ = params;
  const u64 t = params.source_modulus;
  if (params.k_max == 0) throw Error(ErrorCode::kInvalidParams, "k_max must be positive");
  if (params.error.kind == Distribution::Kind::kUniform) {
    throw Error(ErrorCode::kInvalidParams, "error distribution must be bounded");
  }
  if (t < 3 || t % (2 * params.degree) != 1) {
    throw Error(ErrorCode::kInvalidParams, "source modulus must be 1 mod 2N");
  }
  for (u64 q : params.target_moduli) {
    if (q == t) throw Error(ErrorCode::kInvalidParams, "target limbs must differ from the source modulus");
  }
  // RingParams::create validates primality and NTT-friendliness.
  ctx->source_ = RingParams::create(params.degree, {t});
  ctx->target_ = RingParams::create(params.degree, params.target_moduli);
  const BigInt& Q = ctx->target_->q();
  ctx->delta_ = Q / t;
  ctx->slack_ = static_cast<u64>(Q % t);
  const BigInt room = Q - 2 * BigInt(ctx->slack_) * (t - 1) - 1;
  if (room <= 0) throw Error(ErrorCode::kInvalidParams, "target modulus too small");
  ctx->limit_ = room / (2 * BigInt(t));
  if (ctx->budget_noise_bound() > ctx->limit_) {
    throw Error(ErrorCode::kInvalidParams, "k_max combinations would not decode");
  }
  return ctx;
}

BigInt EncodingContext::budget_noise_bound() const {
  const u64 t = params_.source_modulus;
  const BigInt k(params_.k_max);
  return k * (t - 1) * fresh_noise_bound() + BigInt(slack_) * (k * (t - 1) * (t - 1) / t);
}

EncodingKey keygen(const EncodingContextPtr& ctx, const Seed& seed) {
  Prng prng(derive_seed(seed, "encoding-key"));
  const auto s = sample_small(ctx->params().degree, Distribution::ternary(), prng);
  return {RingElement::from_signed(ctx->target_ring(), s).to_ntt()};
}

RingElement slots_to_plaintext(const EncodingContextPtr& ctx, const RingElement& x) {
  if (!x.params().same_as(*ctx->source_ring())) throw Error(ErrorCode::kParamMismatch, "x is not in R_{q_i}");
  if (x.form() != Form::kCoefficient) throw Error(ErrorCode::kFormMismatch, "x must hold slot values");
  std::vector<std::vector<u64>> slots{{x.limb(0).begin(), x.limb(0).end()}};
  return RingElement::from_limbs(ctx->source_ring(), std::move(slots), Form::kNtt).to_coeff();
}

Encoding encode(const EncodingContextPtr& ctx, const EncodingKey& key, const RingElement& x,
                const Seed& seed) {
  const RingElement m = slots_to_plaintext(ctx, x);
  Prng prng(seed);
  const auto& ring = ctx->target_ring();
  std::vector<BigInt> scaled;
  for (u64 c : m.limb(0)) scaled.push_back(ctx->delta() * c);
  Encoding e;
  e.a = sample_poly(ring, Distribution::uniform(), prng).to_ntt();
  const RingElement err = sample_poly(ring, ctx->params().error, prng);
  e.b = (err + RingElement::from_big(ring, scaled)).to_ntt() - e.a * key.s;
  e.noise_bound = ctx->fresh_noise_bound();
  return e;
}

namespace {

std::vector<BigInt> phase(const EncodingContextPtr& ctx, const EncodingKey& key, const Encoding& e) {
  if (!e.a.params().same_as(*ctx->target_ring()) || !e.b.params().same_as(*ctx->target_ring())) {
    throw Error(ErrorCode::kParamMismatch, "encoding is not over R_Q");
  }
  return (e.b + e.a * key.s).to_coeff().to_big();
}

std::vector<u64> round_plaintext(const EncodingContextPtr& ctx, const std::vector<BigInt>& ph) {
  const BigInt& Q = ctx->target_ring()->q();
  const u64 t = ctx->params().source_modulus;
  std::vector<u64> m;
  for (const BigInt& c : ph) m.push_back(static_cast<u64>(((c * t + Q / 2) / Q) % t));
  return m;
}

}  // namespace

RingElement decode(const EncodingContextPtr& ctx, const EncodingKey& key, const Encoding& e) {
  const auto m = round_plaintext(ctx, phase(ctx, key, e));
  const auto slots = RingElement::from_limbs(ctx->source_ring(), {m}, Form::kCoefficient).to_ntt();
  return RingElement::from_limbs(ctx->source_ring(), {{slots.limb(0).begin(), slots.limb(0).end()}},
                                 Form::kCoefficient);
}

BigInt exact_noise(const EncodingContextPtr& ctx, const EncodingKey& key, const Encoding& e) {
  const auto ph = phase(ctx, key, e);
  const auto m = round_plaintext(ctx, ph);
  const BigInt& Q = ctx->target_ring()->q();
  BigInt worst = 0;
  for (std::size_t i = 0; i < ph.size(); ++i) {
    const BigInt v = abs(mod_centered(ph[i] - ctx->delta() * m[i], Q));
    if (v > worst) worst = v;
  }
  return worst;
}

Encoding linear_combine(const EncodingContextPtr& ctx, std::span<const Encoding> encodings,
                        std::span<const u64> scalars) {
  if (encodings.empty() || encodings.size() != scalars.size()) {
    throw Error(ErrorCode::kSizeMismatch, "need one scalar per encoding");
  }
  std::size_t consumed = 0;
  for (std::size_t j = 0; j < encodings.size(); ++j) {
    if (scalars[j] >= ctx->params().source_modulus) throw Error(ErrorCode::kOutOfRange, "scalar not in Z_{q_i}");
    consumed += encodings[j].consumed;
  }
  if (consumed > ctx->params().k_max) {
    throw Error(ErrorCode::kBudgetExceeded, "combination exceeds the linearity budget k_max");
  }
  const BigInt noise = combined_noise(*ctx, encodings, scalars);
  if (noise > ctx->noise_limit()) throw Error(ErrorCode::kNoiseHeadroom, "combination would not decode");

  Encoding out;
  out.a = RingElement::zero(ctx->target_ring(), Form::kNtt);
  out.b = RingElement::zero(ctx->target_ring(), Form::kNtt);
  for (std::size_t j = 0; j < encodings.size(); ++j) {
    out.a += encodings[j].a.scalar_mul_u64(scalars[j]);
    out.b += encodings[j].b.scalar_mul_u64(scalars[j]);
  }
  out.consumed = consumed;
  out.noise_bound = noise;
  return out;
}

Packed pack_source(const RingElement& x) {
  BitWriter w;
  pack_element(w, x);
  return w.finish();
}

Packed pack_encoding(const Encoding& e) {
  BitWriter w;
  pack_element(w, e.a);
  pack_element(w, e.b);
  return w.finish();
}

Encoding unpack_encoding(const EncodingContextPtr& ctx, const Packed& p) {
  BitReader r(p);
  Encoding e;
  e.a = unpack_element(r, ctx->target_ring(), Form::kNtt);
  e.b = unpack_element(r, ctx->target_ring(), Form::kNtt);
  if (!r.done()) throw Error(ErrorCode::kMalformed, "trailing packed data");
  e.consumed = ctx->params().k_max;
  e.noise_bound = ctx->budget_noise_bound();
  return e;
}

double analytic_expansion(std::size_t l, double log2_Q, double log2_q) {
  return static_cast<double>(l) * log2_Q / log2_q;
}

ExpansionReport expansion_factor(const EncodingContextPtr& ctx) {
  ExpansionReport r;
  r.log2_q = std::log2(static_cast<double>(ctx->params().source_modulus));
  for (u64 q : ctx->params().target_moduli) r.log2_Q += std::log2(static_cast<double>(q));
  r.analytic = analytic_expansion(r.l, r.log2_Q, r.log2_q);
  // Bit counts only depend on the shapes; pack zero elements.
  Encoding zero{RingElement::zero(ctx->target_ring(), Form::kNtt),
                RingElement::zero(ctx->target_ring(), Form::kNtt), 1, 0};
  const auto enc_bits = pack_encoding(zero).bits;
  const auto src_bits = pack_source(RingElement::zero(ctx->source_ring())).bits;
  r.measured = static_cast<double>(enc_bits) / static_cast<double>(src_bits);
  r.regev_factor = static_cast<double>(ctx->params().degree) * r.log2_Q / r.log2_q;
  r.improvement = r.regev_factor / r.analytic;
  r.pair_gap = r.measured / r.analytic;
  return r;
}

}  // namespace vfhe::encoding
