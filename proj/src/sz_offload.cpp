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

#include "vfhe/sz_offload.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "json.hpp"
#include "vfhe/error.hpp"

namespace vfhe::sz {
namespace {

using Slots = std::vector<u64>;

// Counted slot-wise arithmetic on one limb.
class Arith {
 public:
  Arith(const Modulus& q, OpLedger& ledger) : q_(q), ledger_(ledger) {}

  Slots scale(u64 a, std::span<const u64> x) {
    ++ledger_.a_x_r;
    Slots out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = q_.mul(a, x[i]);
    return out;
  }
  Slots add(std::span<const u64> x, std::span<const u64> y) {
    ++ledger_.r_plus_r;
    Slots out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = q_.add(x[i], y[i]);
    return out;
  }
  Slots mul(std::span<const u64> x, std::span<const u64> y) {
    ++ledger_.r_x_r;
    Slots out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = q_.mul(x[i], y[i]);
    return out;
  }

 private:
  const Modulus& q_;
  OpLedger& ledger_;
};

std::size_t checked_limbs(const bgv::Ciphertext& c, const CheckOptions& options) {
  if (c.parts.empty()) throw Error(ErrorCode::kInvalidParams, "empty ciphertext");
  return options.all_limbs ? c.parts[0].num_limbs() : 1;
}

void check_shapes(const bgv::Ciphertext& a, const bgv::Ciphertext& b, const bgv::Ciphertext& out) {
  if (a.parts.size() != 2 || b.parts.size() != 2) {
    throw Error(ErrorCode::kDegreeMismatch, "inputs must be degree-1 ciphertexts");
  }
  if (out.parts.size() != 3) throw Error(ErrorCode::kDegreeMismatch, "output must have three parts");
  for (const auto* c : {&a, &b, &out}) {
    for (const auto& p : c->parts) {
      if (p.form() != Form::kNtt) throw Error(ErrorCode::kFormMismatch, "parts must be in NTT form");
      if (!p.params().same_as(a.parts[0].params())) {
        throw Error(ErrorCode::kParamMismatch, "ciphertexts over different rings");
      }
    }
  }
}

// f(a) = (ct0 + a ct1)(ct0' + a ct1') and g(a) = ct0'' + a (ct1'' + a ct2'')
// on one limb.
std::pair<Slots, Slots> evaluate(const bgv::Ciphertext& a, const bgv::Ciphertext& b,
                                 const bgv::Ciphertext& out, std::size_t limb, u64 x, Arith& ar) {
  const auto part = [limb](const bgv::Ciphertext& c, std::size_t i) { return c.parts[i].limb(limb); };
  const Slots u = ar.add(part(a, 0), ar.scale(x, part(a, 1)));
  const Slots v = ar.add(part(b, 0), ar.scale(x, part(b, 1)));
  Slots f = ar.mul(u, v);
  const Slots inner = ar.add(part(out, 1), ar.scale(x, part(out, 2)));
  Slots g = ar.add(part(out, 0), ar.scale(x, inner));
  return {std::move(f), std::move(g)};
}

}  // namespace

OpLedger analytic_check_ledger(std::size_t k) {
  if (k == 0) return {};
  return {4 * k, 6 * k - 2, k};
}

OpLedger analytic_recompute_ledger(std::size_t k) { return {0, k, 4 * k}; }

Tamper random_tamper(const bgv::BgvContextPtr& ctx, std::size_t level, Prng& prng) {
  Tamper t;
  t.part = prng.uniform(3);
  const auto& ring = ctx->ring(level);
  std::vector<std::vector<u64>> limbs(ring->num_limbs(), std::vector<u64>(ring->degree()));
  for (std::size_t i = 0; i < limbs.size(); ++i) {
    // Nonzero in every limb so limb-0 checking sees it.
    const std::size_t slot = prng.uniform(ring->degree());
    for (auto& v : limbs[i]) v = prng.uniform(ring->modulus(i).value());
    if (limbs[i][slot] == 0) limbs[i][slot] = 1;
  }
  t.delta = RingElement::from_limbs(ring, std::move(limbs), Form::kNtt);
  return t;
}

bgv::Ciphertext tensor_untrusted(const bgv::BgvContextPtr& ctx, const bgv::Ciphertext& a,
                                 const bgv::Ciphertext& b, const std::optional<Tamper>& tamper) {
  bgv::Ciphertext out = bgv::tensor(ctx, a, b);
  if (tamper) out.parts.at(tamper->part) += tamper->delta;
  return out;
}

SzTranscript sz_check_single(const bgv::Ciphertext& a, const bgv::Ciphertext& b,
                             const bgv::Ciphertext& out, const Point& point,
                             const CheckOptions& options) {
  return sz_check_batch({{a, b}}, {out}, {point}, options);
}

SzTranscript sz_check_batch(const std::vector<CiphertextPair>& pairs,
                            const std::vector<bgv::Ciphertext>& outs,
                            const std::vector<Point>& points, const CheckOptions& options) {
  if (pairs.empty()) throw Error(ErrorCode::kSizeMismatch, "empty batch");
  if (outs.size() != pairs.size() || points.size() != pairs.size()) {
    throw Error(ErrorCode::kSizeMismatch, "batch lists differ in length");
  }
  const std::size_t limbs = checked_limbs(pairs[0].first, options);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    check_shapes(pairs[i].first, pairs[i].second, outs[i]);
    if (!pairs[i].first.parts[0].params().same_as(pairs[0].first.parts[0].params())) {
      throw Error(ErrorCode::kParamMismatch, "batch over different rings");
    }
    if (points[i].size() != limbs) throw Error(ErrorCode::kSizeMismatch, "point has wrong limb count");
  }
  const RingParams& ring = pairs[0].first.parts[0].params();

  SzTranscript tr;
  tr.points = points;
  tr.lhs.resize(limbs);
  tr.rhs.resize(limbs);
  // Limbs are independent copies of the same ring operation; the ledger
  // counts ring operations, so it is charged once (on limb 0).
  OpLedger discard;
  for (std::size_t l = 0; l < limbs; ++l) {
    Arith ar(ring.modulus(l), l == 0 ? tr.ledger : discard);
    Slots f_sum, g_sum;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const u64 x = points[i][l];
      if (x >= ring.modulus(l).value()) throw Error(ErrorCode::kOutOfRange, "point outside A");
      auto [f, g] = evaluate(pairs[i].first, pairs[i].second, outs[i], l, x, ar);
      f_sum = i == 0 ? std::move(f) : ar.add(f_sum, f);
      g_sum = i == 0 ? std::move(g) : ar.add(g_sum, g);
    }
    tr.lhs[l] = std::move(f_sum);
    tr.rhs[l] = std::move(g_sum);
  }
  tr.accept = tr.lhs == tr.rhs;
  return tr;
}

Point TrustedVerifier::draw_point(const bgv::Ciphertext& like) {
  const std::size_t limbs = checked_limbs(like, options_);
  Point p(limbs);
  for (std::size_t l = 0; l < limbs; ++l) p[l] = prng_.uniform(like.parts[0].params().modulus(l).value());
  return p;
}

SzTranscript TrustedVerifier::check(const bgv::Ciphertext& a, const bgv::Ciphertext& b,
                                    const bgv::Ciphertext& out) {
  return sz_check_single(a, b, out, draw_point(a), options_);
}

SzTranscript TrustedVerifier::check_batch(const std::vector<CiphertextPair>& pairs,
                                          const std::vector<bgv::Ciphertext>& outs) {
  std::vector<Point> points;
  for (const auto& p : pairs) points.push_back(draw_point(p.first));
  return sz_check_batch(pairs, outs, points, options_);
}

double TrustedVerifier::soundness_bits(const bgv::Ciphertext& like) const {
  double bits = 0;
  for (std::size_t l = 0; l < checked_limbs(like, options_); ++l) {
    bits += std::log2(static_cast<double>(like.parts[0].params().modulus(l).value()));
  }
  return bits;
}

std::string OffloadReport::to_json() const {
  const auto ledger = [](const OpLedger& l) {
    return nlohmann::ordered_json{{"a_x_r", l.a_x_r}, {"r_plus_r", l.r_plus_r}, {"r_x_r", l.r_x_r}};
  };
  nlohmann::ordered_json j;
  j["k"] = k;
  j["degree"] = degree;
  j["limbs_checked"] = limbs_checked;
  j["tampered"] = tampered;
  j["verdict"] = verdict ? "accept" : "reject";
  j["ledger"] = {{"verify", ledger(verify_ledger)}, {"recompute", ledger(recompute_ledger)}};
  j["rxr_ratio"] = rxr_ratio;
  j["soundness_bits"] = soundness_bits;
  j["timings"] = {{"recompute_s", recompute_seconds}, {"verify_s", verify_seconds}};
  return j.dump();
}

OffloadReport offload_bench(std::size_t k, const bgv::BgvParams& params, const Seed& seed,
                            bool tamper, const CheckOptions& options) {
  if (k == 0) throw Error(ErrorCode::kInvalidParams, "k must be positive");
  auto ctx = bgv::BgvContext::create(params);
  const std::size_t level = ctx->top_level();
  const auto& ring = ctx->ring(level);
  Prng untrusted(derive_seed(seed, "sz-untrusted"));

  const auto random_ct = [&] {
    std::vector<RingElement> parts;
    for (int i = 0; i < 2; ++i) parts.push_back(sample_poly(ring, Distribution::uniform(), untrusted).to_ntt());
    return bgv::Ciphertext::crafted(std::move(parts), *ctx);
  };
  std::vector<CiphertextPair> pairs;
  std::vector<bgv::Ciphertext> outs;
  const std::size_t victim = tamper ? untrusted.uniform(k) : k;
  for (std::size_t i = 0; i < k; ++i) {
    pairs.emplace_back(random_ct(), random_ct());
    std::optional<Tamper> t;
    if (i == victim) t = random_tamper(ctx, level, untrusted);
    outs.push_back(tensor_untrusted(ctx, pairs.back().first, pairs.back().second, t));
  }

  OffloadReport r;
  r.k = k;
  r.degree = ctx->degree();
  r.tampered = tamper;
  TrustedVerifier verifier(derive_seed(seed, "sz-trusted"), options);
  r.limbs_checked = checked_limbs(pairs[0].first, options);
  r.soundness_bits = verifier.soundness_bits(pairs[0].first);

  using Clock = std::chrono::steady_clock;
  auto t0 = Clock::now();
  const SzTranscript tr = verifier.check_batch(pairs, outs);
  r.verify_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.verdict = tr.accept;
  r.verify_ledger = tr.ledger;

  // Recompute on the same limbs and compare.
  t0 = Clock::now();
  OpLedger discard;
  bool same = true;
  for (std::size_t l = 0; l < r.limbs_checked; ++l) {
    Arith ar(ring->modulus(l), l == 0 ? r.recompute_ledger : discard);
    for (std::size_t i = 0; i < k; ++i) {
      const auto p = [&](const bgv::Ciphertext& c, std::size_t j) { return c.parts[j].limb(l); };
      const auto& [a, b] = pairs[i];
      const Slots d0 = ar.mul(p(a, 0), p(b, 0));
      const Slots d1 = ar.add(ar.mul(p(a, 0), p(b, 1)), ar.mul(p(a, 1), p(b, 0)));
      const Slots d2 = ar.mul(p(a, 1), p(b, 1));
      same = same && std::ranges::equal(d0, p(outs[i], 0)) && std::ranges::equal(d1, p(outs[i], 1)) &&
             std::ranges::equal(d2, p(outs[i], 2));
    }
  }
  r.recompute_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (same && tr.accept != same) throw Error(ErrorCode::kMalformed, "honest batch rejected");
  r.rxr_ratio = static_cast<double>(r.recompute_ledger.r_x_r) / static_cast<double>(r.verify_ledger.r_x_r);
  return r;
}

}  // namespace vfhe::sz
