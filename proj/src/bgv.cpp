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

#include "vfhe/bgv.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "vfhe/error.hpp"

namespace vfhe::bgv {
namespace {

BigInt half_t(const BgvContext& ctx) { return BigInt(ctx.t() / 2); }

BigInt ceil_div(const BigInt& a, const BigInt& b) { return (a + b - 1) / b; }

void check_plaintext(const BgvContext& ctx, const Plaintext& m) {
  if (m.coeffs.size() != ctx.degree()) {
    throw Error(ErrorCode::kSizeMismatch, "plaintext must have N coefficients");
  }
  for (u64 c : m.coeffs) {
    if (c >= ctx.t()) throw Error(ErrorCode::kOutOfRange, "plaintext coefficient not reduced mod t");
  }
}

void check_same_level(const Ciphertext& a, const Ciphertext& b) {
  if (a.level != b.level) throw Error(ErrorCode::kLevelMismatch, "ciphertexts at different levels");
  if (a.correction != b.correction) {
    throw Error(ErrorCode::kLevelMismatch, "ciphertexts carry different message scales");
  }
}

const RingParamsPtr& level_ring(const BgvContext& ctx, const Ciphertext& c) {
  return ctx.ring(c.level);
}

// Residue of each limb multiplied by its own factor.
RingElement scale_limbs(const RingElement& x, const std::vector<u64>& factors) {
  std::vector<std::vector<u64>> limbs = x.limbs();
  for (std::size_t i = 0; i < limbs.size(); ++i) {
    const Modulus& q = x.params().modulus(i);
    for (auto& v : limbs[i]) v = q.mul(v, factors[i]);
  }
  return RingElement::from_limbs(x.params_ptr(), std::move(limbs), x.form());
}

// Small non-negative integer coefficients (< 2^62) lifted into every limb.
RingElement lift_small(const RingParamsPtr& ring, const std::vector<u64>& coeffs) {
  std::vector<std::vector<u64>> limbs(ring->num_limbs(), std::vector<u64>(ring->degree()));
  for (std::size_t i = 0; i < limbs.size(); ++i) {
    const Modulus& q = ring->modulus(i);
    for (std::size_t j = 0; j < coeffs.size(); ++j) limbs[i][j] = q.reduce(coeffs[j]);
  }
  return RingElement::from_limbs(ring, std::move(limbs), Form::kCoefficient);
}

std::size_t digits_for_limb(const Modulus& q, int base_bits) {
  const int bits = std::bit_width(q.value() - 1);
  return static_cast<std::size_t>((bits + base_bits - 1) / base_bits);
}

u64 max_digit(const Modulus& q, int base_bits, std::size_t digit) {
  const u64 mask = base_bits >= 64 ? ~0ULL : (1ULL << base_bits) - 1;
  const u64 top = (q.value() - 1) >> (static_cast<u64>(base_bits) * digit);
  return std::min(mask, top);
}

BigInt inf_norm_centered(const RingElement& x) {
  BigInt m = 0;
  for (const auto& c : x.to_coeff().to_centered()) m = std::max(m, BigInt(abs(c)));
  return m;
}

}  // namespace

BgvParams BgvParams::desk() {
  BgvParams p;
  p.degree = 8;
  p.moduli = {257, 241};
  p.plain_modulus = 17;
  return p;
}

BgvParams BgvParams::desk_chain() {
  BgvParams p = desk();
  p.moduli = {257, 241, 193};
  return p;
}

BgvParams BgvParams::paper() {
  BgvParams p;
  p.degree = 8192;
  const u64 step = 2 * p.degree;
  p.moduli = {find_ntt_prime(45, step), find_ntt_prime(46, step), find_ntt_prime(46, step, 1)};
  // Also 1 mod 2N so the plaintext ring batches.
  p.plain_modulus = 65537;
  p.error = Distribution::centered_binomial(21);
  return p;
}

std::shared_ptr<const BgvContext> BgvContext::create(const BgvParams& params) {
  auto ctx = std::shared_ptr<BgvContext>(new BgvContext());
  ctx->params_ = params;
  if (params.plain_modulus < 2) throw Error(ErrorCode::kInvalidParams, "t must be >= 2");
  if (params.relin_base_bits < 1 || params.relin_base_bits > 62) {
    throw Error(ErrorCode::kInvalidParams, "relinearization base must be 1..62 bits");
  }
  if (params.flood_bits < 0 || params.flood_bits > 40) {
    throw Error(ErrorCode::kInvalidParams, "flood_bits out of range");
  }
  if (params.error.kind == Distribution::Kind::kUniform) {
    throw Error(ErrorCode::kInvalidParams, "error distribution must be bounded");
  }
  ctx->t_mod_ = Modulus(params.plain_modulus);
  for (u64 q : params.moduli) {
    if (q % params.plain_modulus == 0) {
      throw Error(ErrorCode::kInvalidParams, "t must be coprime to every modulus");
    }
  }
  auto top = RingParams::create(params.degree, params.moduli);
  for (std::size_t l = 1; l < params.moduli.size(); ++l) ctx->rings_.push_back(top->prefix(l));
  ctx->rings_.push_back(top);
  return ctx;
}

const RingParamsPtr& BgvContext::ring(std::size_t level) const {
  if (level == 0 || level > rings_.size()) throw Error(ErrorCode::kLevelMismatch, "invalid level");
  return rings_[level - 1];
}

RingElement SecretKey::at_level(std::size_t level, const BgvContext& ctx) const {
  return s.restrict_to(ctx.ring(level));
}

Ciphertext Ciphertext::crafted(std::vector<RingElement> parts, const BgvContext& ctx) {
  if (parts.empty()) throw Error(ErrorCode::kDegreeMismatch, "ciphertext needs a part");
  Ciphertext c;
  c.level = parts[0].num_limbs();
  c.parts = std::move(parts);
  c.noise_bound = ctx.ring(c.level)->q() / 2;
  return c;
}

PublicKey public_key_at(const PublicKey& pk, std::size_t level, const BgvContext& ctx) {
  const auto& ring = ctx.ring(level);
  return {pk.p0.restrict_to(ring), pk.p1.restrict_to(ring)};
}

namespace {

KeySet keygen_from_secret(const BgvContextPtr& ctx, std::vector<std::int64_t> s_coeffs,
                          const Seed& seed) {
  const auto& ring = ctx->top_ring();
  const u64 t = ctx->t();
  KeySet keys;
  keys.sk.coeffs = std::move(s_coeffs);
  keys.sk.s = RingElement::from_signed(ring, keys.sk.coeffs, Form::kNtt);
  const RingElement& s = keys.sk.s;

  Prng pk_rng(derive_seed(seed, "pk"));
  RingElement a = sample_poly(ring, Distribution::uniform(), pk_rng).to_ntt();
  RingElement e = sample_poly(ring, ctx->params().error, pk_rng).to_ntt();
  keys.pk.p0 = a * s + e.scalar_mul_u64(t);
  keys.pk.p1 = -a;

  Prng rk_rng(derive_seed(seed, "rk"));
  const RingElement s2 = s * s;
  const int w = ctx->params().relin_base_bits;
  keys.rk.base_bits = w;
  for (std::size_t j = 0; j < ring->num_limbs(); ++j) {
    const Modulus& qj = ring->modulus(j);
    for (std::size_t k = 0; k < digits_for_limb(qj, w); ++k) {
      std::vector<u64> factors(ring->num_limbs(), 0);
      factors[j] = qj.pow(2, static_cast<u64>(w) * k);
      RingElement ak = sample_poly(ring, Distribution::uniform(), rk_rng).to_ntt();
      RingElement ek = sample_poly(ring, ctx->params().error, rk_rng).to_ntt();
      RelinKey::Pair pair;
      pair.limb = j;
      pair.digit = k;
      pair.k0 = ak * s + ek.scalar_mul_u64(t) + scale_limbs(s2, factors);
      pair.k1 = -ak;
      keys.rk.pairs.push_back(std::move(pair));
    }
  }
  return keys;
}

}  // namespace

KeySet keygen(const BgvContextPtr& ctx, const Seed& seed) {
  Prng sk_rng(derive_seed(seed, "sk"));
  return keygen_from_secret(ctx, sample_small(ctx->degree(), Distribution::ternary(), sk_rng), seed);
}

KeySet keygen_with_secret(const BgvContextPtr& ctx, std::vector<std::int64_t> s_coeffs,
                          const Seed& seed) {
  if (s_coeffs.size() != ctx->degree()) throw Error(ErrorCode::kSizeMismatch, "secret length");
  for (auto c : s_coeffs) {
    if (c < -1 || c > 1) throw Error(ErrorCode::kOutOfRange, "secret must be ternary");
  }
  return keygen_from_secret(ctx, std::move(s_coeffs), seed);
}

RingElement embed(const Plaintext& m, const RingParamsPtr& ring) { return lift_small(ring, m.coeffs); }

BigInt fresh_noise_bound(const BgvContext& ctx) {
  return BigInt(ctx.t()) * ctx.error_bound() * (2 * ctx.degree() + 1);
}

BigInt flood_noise_bound(const BgvContext& ctx, std::size_t count) {
  const BigInt n = ctx.degree();
  return BigInt(count) * ctx.t() * (n * ctx.error_bound() + (n + 1) * ctx.flood_bound());
}

BigInt noise_capacity(const BgvContext& ctx, std::size_t level) {
  return (ctx.ring(level)->q() - 1) / 2 - half_t(ctx);
}

bool within_capacity(const BgvContext& ctx, const Ciphertext& c) {
  return c.noise_bound <= noise_capacity(ctx, c.level);
}

Ciphertext encrypt(const BgvContextPtr& ctx, const PublicKey& pk, const Plaintext& m,
                   const Seed& seed) {
  check_plaintext(*ctx, m);
  const auto& ring = ctx->top_ring();
  const u64 t = ctx->t();
  Prng prng(seed);
  auto u = sample_small(ring->degree(), Distribution::ternary(), prng);
  auto e0 = sample_small(ring->degree(), ctx->params().error, prng);
  auto e1 = sample_small(ring->degree(), ctx->params().error, prng);
  std::vector<std::int64_t> centered(m.coeffs.size());
  for (std::size_t j = 0; j < centered.size(); ++j) {
    centered[j] = ctx->t_mod().centered(m.coeffs[j]);
  }
  Ciphertext c;
  c.level = ctx->top_level();
  c.parts.push_back(zero_encryption_part(pk.p0, u, e0, t) +
                    RingElement::from_signed(ring, centered, Form::kNtt));
  c.parts.push_back(zero_encryption_part(pk.p1, u, e1, t));
  c.noise_bound = fresh_noise_bound(*ctx);
  return c;
}

RingElement zero_encryption_part(const RingElement& pk_part, const std::vector<std::int64_t>& u,
                                 const std::vector<std::int64_t>& e, u64 t) {
  const auto& ring = pk_part.params_ptr();
  RingElement un = RingElement::from_signed(ring, u, Form::kNtt);
  RingElement en = RingElement::from_signed(ring, e, Form::kNtt);
  return pk_part * un + en.scalar_mul_u64(t);
}

std::vector<BigInt> phase(const BgvContextPtr& ctx, const SecretKey& sk, const Ciphertext& c) {
  if (c.parts.empty()) return std::vector<BigInt>(ctx->degree(), 0);
  const RingParamsPtr& ring = c.parts[0].params_ptr();
  const RingElement s = sk.s.restrict_to(ring);
  RingElement acc = c.parts.back();
  for (std::size_t i = c.parts.size() - 1; i-- > 0;) acc = acc * s + c.parts[i];
  return acc.to_coeff().to_centered();
}

Plaintext decrypt(const BgvContextPtr& ctx, const SecretKey& sk, const Ciphertext& c) {
  const BigInt t = ctx->t();
  Plaintext m = Plaintext::zero(ctx->degree());
  auto ph = phase(ctx, sk, c);
  for (std::size_t j = 0; j < ph.size(); ++j) {
    const u64 v = static_cast<u64>(mod_floor(ph[j], t));
    m.coeffs[j] = ctx->t_mod().mul(v, c.correction % ctx->t());
  }
  return m;
}

BigInt exact_noise(const BgvContextPtr& ctx, const SecretKey& sk, const Ciphertext& c) {
  const BigInt t = ctx->t();
  BigInt worst = 0;
  for (const auto& v : phase(ctx, sk, c)) {
    BigInt e = v - mod_centered(v, t);
    worst = std::max(worst, BigInt(abs(e)));
  }
  return worst;
}

Ciphertext eval_add(const BgvContextPtr& ctx, const Ciphertext& a, const Ciphertext& b) {
  check_same_level(a, b);
  Ciphertext out = a.parts.size() >= b.parts.size() ? a : b;
  const Ciphertext& other = a.parts.size() >= b.parts.size() ? b : a;
  for (std::size_t i = 0; i < other.parts.size(); ++i) out.parts[i] += other.parts[i];
  out.noise_bound = a.noise_bound + b.noise_bound + ctx->t();
  return out;
}

Ciphertext eval_sub(const BgvContextPtr& ctx, const Ciphertext& a, const Ciphertext& b) {
  check_same_level(a, b);
  Ciphertext out = a;
  const auto& ring = level_ring(*ctx, a);
  while (out.parts.size() < b.parts.size()) out.parts.push_back(RingElement::zero(ring, Form::kNtt));
  for (std::size_t i = 0; i < b.parts.size(); ++i) out.parts[i] -= b.parts[i];
  out.noise_bound = a.noise_bound + b.noise_bound + ctx->t();
  return out;
}

namespace {

// m * correction^{-1} (mod t), so decryption's final scaling restores m.
Plaintext unscale(const BgvContext& ctx, const Plaintext& m, u64 correction) {
  if (correction == 1) return m;
  const u64 inv = ctx.t_mod().inv(correction);
  Plaintext out = m;
  for (auto& c : out.coeffs) c = ctx.t_mod().mul(c, inv);
  return out;
}

}  // namespace

Ciphertext eval_add_pt(const BgvContextPtr& ctx, const Ciphertext& c, const Plaintext& m) {
  check_plaintext(*ctx, m);
  Ciphertext out = c;
  out.parts[0] += embed(unscale(*ctx, m, c.correction), level_ring(*ctx, c)).to_ntt();
  out.noise_bound = c.noise_bound + ctx->t();
  return out;
}

Ciphertext eval_sub_pt(const BgvContextPtr& ctx, const Ciphertext& c, const Plaintext& m) {
  check_plaintext(*ctx, m);
  Ciphertext out = c;
  out.parts[0] -= embed(unscale(*ctx, m, c.correction), level_ring(*ctx, c)).to_ntt();
  out.noise_bound = c.noise_bound + ctx->t();
  return out;
}

Ciphertext eval_mul_pt(const BgvContextPtr& ctx, const Ciphertext& c, const Plaintext& m) {
  check_plaintext(*ctx, m);
  Ciphertext out = c;
  const RingElement mn = embed(m, level_ring(*ctx, c)).to_ntt();
  for (auto& p : out.parts) p = p * mn;
  const u64 norm = *std::max_element(m.coeffs.begin(), m.coeffs.end());
  out.noise_bound = BigInt(ctx->degree()) * norm * (c.noise_bound + half_t(*ctx)) + half_t(*ctx);
  return out;
}

Ciphertext eval_add_raw(const BgvContextPtr& ctx, const Ciphertext& c, const RingElement& r) {
  Ciphertext out = c;
  RingElement rn = r.form() == Form::kNtt ? r : r.to_ntt();
  out.parts[0] += rn;
  out.noise_bound = c.noise_bound + inf_norm_centered(rn) + ctx->t();
  return out;
}

Ciphertext tensor(const BgvContextPtr& ctx, const Ciphertext& a, const Ciphertext& b) {
  if (a.parts.size() != 2 || b.parts.size() != 2) {
    throw Error(ErrorCode::kDegreeMismatch, "tensor needs two degree-1 ciphertexts");
  }
  if (a.level != b.level) throw Error(ErrorCode::kLevelMismatch, "ciphertexts at different levels");
  Ciphertext out;
  out.level = a.level;
  out.parts.push_back(a.parts[0] * b.parts[0]);
  out.parts.push_back(a.parts[0] * b.parts[1] + b.parts[0] * a.parts[1]);
  out.parts.push_back(a.parts[1] * b.parts[1]);
  const BigInt h = half_t(*ctx);
  out.noise_bound = BigInt(ctx->degree()) * (a.noise_bound + h) * (b.noise_bound + h) + h;
  out.correction = ctx->t_mod().mul(a.correction, b.correction);
  return out;
}

Ciphertext relinearize(const BgvContextPtr& ctx, const Ciphertext& c, const RelinKey* rk) {
  if (rk == nullptr || rk->pairs.empty()) throw Error(ErrorCode::kMissingKey, "no relinearization key");
  if (c.parts.size() != 3) throw Error(ErrorCode::kDegreeMismatch, "relinearize needs 3 parts");
  const auto& ring = level_ring(*ctx, c);
  const int w = rk->base_bits;
  const u64 mask = (1ULL << w) - 1;
  Ciphertext out;
  out.level = c.level;
  out.correction = c.correction;
  out.parts = {c.parts[0], c.parts[1]};
  BigInt added = 0;
  const RingElement c2 = c.parts[2].to_coeff();
  for (const auto& pair : rk->pairs) {
    if (pair.limb >= ring->num_limbs()) continue;
    const Modulus& qj = ring->modulus(pair.limb);
    std::vector<u64> digit(ring->degree());
    const auto residues = c2.limb(pair.limb);
    for (std::size_t n = 0; n < digit.size(); ++n) {
      digit[n] = (residues[n] >> (static_cast<u64>(w) * pair.digit)) & mask;
    }
    const RingElement d = lift_small(ring, digit).to_ntt();
    out.parts[0] += d * pair.k0.restrict_to(ring);
    out.parts[1] += d * pair.k1.restrict_to(ring);
    added += max_digit(qj, w, pair.digit);
  }
  out.noise_bound = c.noise_bound + added * ctx->degree() * ctx->t() * ctx->error_bound();
  return out;
}

Ciphertext mod_switch(const BgvContextPtr& ctx, const Ciphertext& c, ModSwitchTrace* trace) {
  if (c.level <= 1) throw Error(ErrorCode::kNoLevelsLeft, "no modulus left to drop");
  const auto& ring = level_ring(*ctx, c);
  const auto& next = ctx->ring(c.level - 1);
  const std::size_t last = c.level - 1;
  const Modulus& ql = ring->modulus(last);
  const u64 t = ctx->t();
  const u64 t_inv = ql.inv(t % ql.value());
  Ciphertext out;
  out.level = c.level - 1;
  out.correction = ctx->t_mod().mul(c.correction, ql.value() % t);
  if (trace) trace->delta.clear();
  for (const auto& part : c.parts) {
    const RingElement coeff = part.to_coeff();
    const auto cl = coeff.limb(last);
    std::vector<std::int64_t> delta(ring->degree());
    for (std::size_t n = 0; n < delta.size(); ++n) delta[n] = ql.centered(ql.mul(cl[n], t_inv));
    std::vector<std::vector<u64>> limbs(next->num_limbs());
    for (std::size_t i = 0; i < limbs.size(); ++i) {
      const Modulus& qi = next->modulus(i);
      const u64 ql_inv = qi.inv(ql.value() % qi.value());
      const u64 t_i = t % qi.value();
      const auto ci = coeff.limb(i);
      limbs[i].resize(ring->degree());
      for (std::size_t n = 0; n < delta.size(); ++n) {
        const u64 d = qi.mul(t_i, qi.from_signed(delta[n]));
        limbs[i][n] = qi.mul(qi.sub(ci[n], d), ql_inv);
      }
    }
    out.parts.push_back(RingElement::from_limbs(next, std::move(limbs), Form::kCoefficient).to_ntt());
    if (trace) trace->delta.push_back(std::move(delta));
  }
  // |Delta| / q_L <= (t/2) * sum_i ||s^i||_1 <= (t/2) * sum_i N^i.
  BigInt spread = 0, power = 1;
  for (std::size_t i = 0; i < c.parts.size(); ++i) {
    spread += power;
    power *= ctx->degree();
  }
  const BigInt h = half_t(*ctx);
  out.noise_bound = ceil_div(c.noise_bound + h, BigInt(ql.value())) + (h + 1) * spread + h;
  return out;
}

Ciphertext noise_flood(const BgvContextPtr& ctx, const Ciphertext& c, const PublicKey& pk,
                       std::size_t count, const Seed& seed, FloodTrace* trace) {
  if (trace) trace->addends.clear();
  if (count == 0) return c;
  const BigInt added = flood_noise_bound(*ctx, count);
  if (c.noise_bound + added > noise_capacity(*ctx, c.level)) {
    throw Error(ErrorCode::kNoiseHeadroom, "flooding would exceed the noise capacity");
  }
  const PublicKey key = public_key_at(pk, c.level, *ctx);
  const u64 t = ctx->t();
  const std::int64_t bound = ctx->flood_bound();
  Prng prng(seed);
  Ciphertext out = c;
  for (std::size_t f = 0; f < count; ++f) {
    ZeroEncRandomness r;
    r.u = sample_small(ctx->degree(), Distribution::ternary(), prng);
    r.e0.resize(ctx->degree());
    r.e1.resize(ctx->degree());
    for (auto& v : r.e0) v = prng.uniform_signed(-bound, bound);
    for (auto& v : r.e1) v = prng.uniform_signed(-bound, bound);
    out.parts[0] += zero_encryption_part(key.p0, r.u, r.e0, t);
    out.parts[1] += zero_encryption_part(key.p1, r.u, r.e1, t);
    if (trace) trace->addends.push_back(std::move(r));
  }
  out.noise_bound = c.noise_bound + added;
  return out;
}

DecryptionOracle unprotected_oracle(BgvContextPtr ctx, SecretKey sk) {
  return [ctx = std::move(ctx), sk = std::move(sk)](const Ciphertext& c) -> std::optional<Plaintext> {
    return decrypt(ctx, sk, c);
  };
}

std::optional<std::vector<std::int64_t>> attack_trivial_ct(const BgvContextPtr& ctx,
                                                           const DecryptionOracle& oracle) {
  const auto& ring = ctx->top_ring();
  Ciphertext probe = Ciphertext::crafted(
      {RingElement::zero(ring, Form::kNtt), RingElement::constant(ring, 1, Form::kNtt)}, *ctx);
  auto answer = oracle(probe);
  if (!answer) return std::nullopt;
  std::vector<std::int64_t> key(answer->coeffs.size());
  for (std::size_t j = 0; j < key.size(); ++j) key[j] = ctx->t_mod().centered(answer->coeffs[j]);
  return key;
}

Ciphertext relin_key_as_ciphertext(const BgvContextPtr& ctx, const RelinKey& rk) {
  const auto& ring = ctx->top_ring();
  RingElement k0 = RingElement::zero(ring, Form::kNtt), k1 = k0;
  for (const auto& pair : rk.pairs) {
    if (pair.digit != 0) continue;
    k0 += pair.k0;
    k1 += pair.k1;
  }
  return Ciphertext::crafted({k0, k1}, *ctx);
}

std::optional<Plaintext> attack_relin_key(const BgvContextPtr& ctx, const DecryptionOracle& oracle,
                                          const RelinKey& rk) {
  return oracle(relin_key_as_ciphertext(ctx, rk));
}

Plaintext secret_square_mod_t(const BgvContextPtr& ctx, const SecretKey& sk) {
  const auto sq = (sk.s * sk.s).to_coeff().to_centered();
  Plaintext out = Plaintext::zero(ctx->degree());
  for (std::size_t j = 0; j < sq.size(); ++j) {
    out.coeffs[j] = static_cast<u64>(mod_floor(sq[j], BigInt(ctx->t())));
  }
  return out;
}

ReactionOracle noise_reaction_client(BgvContextPtr ctx, SecretKey sk, BigInt honest_limit) {
  return [ctx = std::move(ctx), sk = std::move(sk), limit = std::move(honest_limit)](
             const Ciphertext& c) { return exact_noise(ctx, sk, c) > limit; };
}

ProbeOutcome attack_overflow_probe(const BgvContextPtr& ctx, const Ciphertext& client_ct,
                                   const RingElement& w2, const ReactionOracle& reaction) {
  ProbeOutcome out;
  out.result = eval_add_raw(ctx, eval_mul_pt(ctx, client_ct, Plaintext::zero(ctx->degree())), w2);
  out.failure_observed = reaction(out.result);
  return out;
}

namespace {

void put_header(std::vector<std::uint8_t>& out, ObjectTag tag) {
  wire::put_bytes(out, "VFHE");
  wire::put_u8(out, kFormatVersion);
  wire::put_u8(out, static_cast<std::uint8_t>(tag));
}

void get_header(std::span<const std::uint8_t> in, std::size_t& pos, ObjectTag tag) {
  wire::expect_bytes(in, pos, "VFHE");
  if (wire::get_u8(in, pos) != kFormatVersion) throw Error(ErrorCode::kMalformed, "unknown version");
  if (wire::get_u8(in, pos) != static_cast<std::uint8_t>(tag)) {
    throw Error(ErrorCode::kMalformed, "unexpected object type tag");
  }
}

RingElement read_in(const BgvContextPtr& ctx, std::span<const std::uint8_t> in, std::size_t& pos,
                    std::size_t level) {
  RingElement x = read_ring_element(in, pos, ctx->ring(level));
  if (!x.params().same_as(*ctx->ring(level))) {
    throw Error(ErrorCode::kMalformed, "element does not belong to this context");
  }
  return x;
}

void finish(std::span<const std::uint8_t> in, std::size_t pos) {
  if (pos != in.size()) throw Error(ErrorCode::kMalformed, "trailing bytes");
}

}  // namespace

std::vector<std::uint8_t> serialize(const SecretKey& sk) {
  std::vector<std::uint8_t> out;
  put_header(out, ObjectTag::kSecretKey);
  write_ring_element(out, sk.s.to_coeff());
  return out;
}

std::vector<std::uint8_t> serialize(const PublicKey& pk) {
  std::vector<std::uint8_t> out;
  put_header(out, ObjectTag::kPublicKey);
  write_ring_element(out, pk.p0);
  write_ring_element(out, pk.p1);
  return out;
}

std::vector<std::uint8_t> serialize(const RelinKey& rk) {
  std::vector<std::uint8_t> out;
  put_header(out, ObjectTag::kRelinKey);
  wire::put_u32(out, static_cast<std::uint32_t>(rk.base_bits));
  wire::put_u32(out, static_cast<std::uint32_t>(rk.pairs.size()));
  for (const auto& p : rk.pairs) {
    wire::put_u32(out, static_cast<std::uint32_t>(p.limb));
    wire::put_u32(out, static_cast<std::uint32_t>(p.digit));
    write_ring_element(out, p.k0);
    write_ring_element(out, p.k1);
  }
  return out;
}

std::vector<std::uint8_t> serialize(const Ciphertext& c) {
  std::vector<std::uint8_t> out;
  put_header(out, ObjectTag::kCiphertext);
  wire::put_u32(out, static_cast<std::uint32_t>(c.level));
  wire::put_u64(out, c.correction);
  const std::string bound = to_decimal(c.noise_bound);
  wire::put_u32(out, static_cast<std::uint32_t>(bound.size()));
  wire::put_bytes(out, bound);
  wire::put_u32(out, static_cast<std::uint32_t>(c.parts.size()));
  for (const auto& p : c.parts) write_ring_element(out, p);
  return out;
}

SecretKey deserialize_secret_key(const BgvContextPtr& ctx, std::span<const std::uint8_t> in) {
  std::size_t pos = 0;
  get_header(in, pos, ObjectTag::kSecretKey);
  RingElement s = read_in(ctx, in, pos, ctx->top_level());
  finish(in, pos);
  SecretKey sk;
  for (const auto& c : s.to_centered()) {
    if (abs(c) > 1) throw Error(ErrorCode::kMalformed, "secret key is not ternary");
    sk.coeffs.push_back(c.convert_to<std::int64_t>());
  }
  sk.s = s.to_ntt();
  return sk;
}

PublicKey deserialize_public_key(const BgvContextPtr& ctx, std::span<const std::uint8_t> in) {
  std::size_t pos = 0;
  get_header(in, pos, ObjectTag::kPublicKey);
  PublicKey pk;
  pk.p0 = read_in(ctx, in, pos, ctx->top_level());
  pk.p1 = read_in(ctx, in, pos, ctx->top_level());
  finish(in, pos);
  return pk;
}

RelinKey deserialize_relin_key(const BgvContextPtr& ctx, std::span<const std::uint8_t> in) {
  std::size_t pos = 0;
  get_header(in, pos, ObjectTag::kRelinKey);
  RelinKey rk;
  rk.base_bits = static_cast<int>(wire::get_u32(in, pos));
  if (rk.base_bits < 1 || rk.base_bits > 62) throw Error(ErrorCode::kMalformed, "bad digit width");
  const std::uint32_t count = wire::get_u32(in, pos);
  for (std::uint32_t i = 0; i < count; ++i) {
    RelinKey::Pair p;
    p.limb = wire::get_u32(in, pos);
    p.digit = wire::get_u32(in, pos);
    p.k0 = read_in(ctx, in, pos, ctx->top_level());
    p.k1 = read_in(ctx, in, pos, ctx->top_level());
    rk.pairs.push_back(std::move(p));
  }
  finish(in, pos);
  return rk;
}

Ciphertext deserialize_ciphertext(const BgvContextPtr& ctx, std::span<const std::uint8_t> in) {
  std::size_t pos = 0;
  get_header(in, pos, ObjectTag::kCiphertext);
  Ciphertext c;
  c.level = wire::get_u32(in, pos);
  if (c.level == 0 || c.level > ctx->top_level()) throw Error(ErrorCode::kMalformed, "bad level");
  c.correction = wire::get_u64(in, pos);
  const std::uint32_t len = wire::get_u32(in, pos);
  if (pos + len > in.size()) throw Error(ErrorCode::kMalformed, "truncated noise bound");
  c.noise_bound = parse_decimal(std::string(in.begin() + static_cast<std::ptrdiff_t>(pos),
                                            in.begin() + static_cast<std::ptrdiff_t>(pos + len)));
  pos += len;
  const std::uint32_t parts = wire::get_u32(in, pos);
  if (parts == 0 || parts > 16) throw Error(ErrorCode::kMalformed, "bad part count");
  for (std::uint32_t i = 0; i < parts; ++i) c.parts.push_back(read_in(ctx, in, pos, c.level));
  finish(in, pos);
  return c;
}

}  // namespace vfhe::bgv
