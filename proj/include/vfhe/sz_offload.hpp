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

#ifndef VFHE_SZ_OFFLOAD_HPP_
#define VFHE_SZ_OFFLOAD_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vfhe/bgv.hpp"

// Outsourced tensoring checked by polynomial identity testing.
//
// A degree-1 ciphertext is read as a polynomial in one variable with ring
// coefficients, ct(Y) = ct0 + ct1*Y. Tensoring is polynomial multiplication,
// so ct'' = ct*ct' holds iff the two sides agree at a random scalar a from
// the exceptional set A = {0, ..., q_1 - 1}. Evaluation is slot-wise over
// the NTT representation of the checked limbs; nothing here is
// zero-knowledge.
namespace vfhe::sz {

// Ring-operation counts: scalar-by-ring, ring addition, ring product.
struct OpLedger {
  u64 a_x_r = 0;
  u64 r_plus_r = 0;
  u64 r_x_r = 0;

  OpLedger& operator+=(const OpLedger& o) {
    a_x_r += o.a_x_r;
    r_plus_r += o.r_plus_r;
    r_x_r += o.r_x_r;
    return *this;
  }
  friend OpLedger operator+(OpLedger a, const OpLedger& b) { return a += b; }
  friend bool operator==(const OpLedger&, const OpLedger&) = default;
};

// Single check: 4 A×R, 4 R+R, 1 R×R. Batch of k: 4k, 6k-2, k.
OpLedger analytic_check_ledger(std::size_t k);
// Recomputing k tensors: 4k R×R, k R+R.
OpLedger analytic_recompute_ledger(std::size_t k);

struct CheckOptions {
  // Check every RNS limb with an independent point instead of limb 0 only.
  bool all_limbs = false;
};

// A point of A per checked limb (one entry unless all_limbs).
using Point = std::vector<u64>;

struct SzTranscript {
  std::vector<Point> points;
  // [checked limb][slot] values of both sides.
  std::vector<std::vector<u64>> lhs;
  std::vector<std::vector<u64>> rhs;
  bool accept = false;
  OpLedger ledger;
};

// The untrusted accelerator's deviation: delta added to one output part.
struct Tamper {
  std::size_t part = 0;
  RingElement delta;  // NTT form at the output ring
};
Tamper random_tamper(const bgv::BgvContextPtr& ctx, std::size_t level, Prng& prng);

// Untrusted side: engine tensoring, optionally perturbed.
bgv::Ciphertext tensor_untrusted(const bgv::BgvContextPtr& ctx, const bgv::Ciphertext& a,
                                 const bgv::Ciphertext& b, const std::optional<Tamper>& tamper = {});

SzTranscript sz_check_single(const bgv::Ciphertext& a, const bgv::Ciphertext& b,
                             const bgv::Ciphertext& out, const Point& point,
                             const CheckOptions& options = {});

using CiphertextPair = std::pair<bgv::Ciphertext, bgv::Ciphertext>;
SzTranscript sz_check_batch(const std::vector<CiphertextPair>& pairs,
                            const std::vector<bgv::Ciphertext>& outs,
                            const std::vector<Point>& points, const CheckOptions& options = {});

// Trusted side: owns the point randomness.
class TrustedVerifier {
 public:
  explicit TrustedVerifier(const Seed& seed, CheckOptions options = {})
      : prng_(seed), options_(options) {}

  Point draw_point(const bgv::Ciphertext& like);
  SzTranscript check(const bgv::Ciphertext& a, const bgv::Ciphertext& b, const bgv::Ciphertext& out);
  SzTranscript check_batch(const std::vector<CiphertextPair>& pairs,
                           const std::vector<bgv::Ciphertext>& outs);
  // log2 |A|, summed over checked limbs.
  double soundness_bits(const bgv::Ciphertext& like) const;

 private:
  Prng prng_;
  CheckOptions options_;
};

struct OffloadReport {
  std::size_t k = 0;
  std::size_t degree = 0;
  std::size_t limbs_checked = 0;
  bool tampered = false;
  bool verdict = false;
  OpLedger verify_ledger;
  OpLedger recompute_ledger;
  double rxr_ratio = 0;  // recompute R×R / verify R×R
  double soundness_bits = 0;
  double recompute_seconds = 0;
  double verify_seconds = 0;
  std::string to_json() const;
};

// k random degree-1 ciphertext pairs, tensored by the untrusted side
// (one output perturbed when `tamper`), then checked and recomputed on the
// same limbs.
OffloadReport offload_bench(std::size_t k, const bgv::BgvParams& params, const Seed& seed,
                            bool tamper = false, const CheckOptions& options = {});

}  // namespace vfhe::sz

#endif  // VFHE_SZ_OFFLOAD_HPP_
