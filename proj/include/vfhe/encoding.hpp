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

#ifndef VFHE_ENCODING_HPP_
#define VFHE_ENCODING_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vfhe/bigint.hpp"
#include "vfhe/ring.hpp"

// Batched Regev-style RLWE encoding of R_{q_i} elements, k-linearly
// homomorphic.
//
// The N values of a source element x are placed in the NTT slots of the
// plaintext ring R_{q_i} (slot k is evaluation at psi^(2 brv(k) + 1)) and
// the resulting polynomial m is encrypted under a symmetric key as
//   (a, b = -a*s + e + Delta*m) in R_Q^2,  Delta = floor(Q / q_i).
namespace vfhe::encoding {

struct EncodingParams {
  std::size_t degree = 8;
  u64 source_modulus = 257;  // q_i, prime, 1 mod 2N
  std::vector<u64> target_moduli;  // RNS limbs of Q
  std::size_t k_max = 8;
  Distribution error = Distribution::centered_binomial(2);

  // N = 8, q_i = 257, Q = two 30-bit NTT primes, k_max = 8.
  static EncodingParams desk();
  // q_i a 45-bit NTT prime at N = 8192, Q = three 60-bit primes.
  static EncodingParams paper();
};

class EncodingContext;
using EncodingContextPtr = std::shared_ptr<const EncodingContext>;

class EncodingContext {
 public:
  // Throws kInvalidParams when q_i is not 1 mod 2N or when k_max worst-case
  // combinations would not decode.
  static EncodingContextPtr create(const EncodingParams& params);

  const EncodingParams& params() const noexcept { return params_; }
  const RingParamsPtr& source_ring() const noexcept { return source_; }
  const RingParamsPtr& target_ring() const noexcept { return target_; }
  const BigInt& delta() const noexcept { return delta_; }
  // Q mod q_i: the rounding slack of Delta.
  u64 slack() const noexcept { return slack_; }
  // Largest noise bound that still decodes: 2t*B + 2r(t-1) < Q.
  const BigInt& noise_limit() const noexcept { return limit_; }
  BigInt fresh_noise_bound() const { return BigInt(params_.error.bound()); }
  // Noise bound after combining k_max fresh encodings with scalars < q_i.
  BigInt budget_noise_bound() const;

 private:
  EncodingContext() = default;
  EncodingParams params_;
  RingParamsPtr source_;
  RingParamsPtr target_;
  BigInt delta_;
  u64 slack_ = 0;
  BigInt limit_;
};

struct EncodingKey {
  RingElement s;  // ternary, NTT form over R_Q
};
EncodingKey keygen(const EncodingContextPtr& ctx, const Seed& seed);

struct Encoding {
  RingElement a;  // NTT form over R_Q
  RingElement b;
  // Fresh encodings consumed by this value; at most k_max.
  std::size_t consumed = 1;
  BigInt noise_bound;
};

// x holds the N slot values, coefficient-indexed, reduced mod q_i.
Encoding encode(const EncodingContextPtr& ctx, const EncodingKey& key, const RingElement& x,
                const Seed& seed);
RingElement decode(const EncodingContextPtr& ctx, const EncodingKey& key, const Encoding& e);
// ||phase - Delta*m||_inf for the decoded m.
BigInt exact_noise(const EncodingContextPtr& ctx, const EncodingKey& key, const Encoding& e);
// The plaintext polynomial carrying x in its slots.
RingElement slots_to_plaintext(const EncodingContextPtr& ctx, const RingElement& x);

// sum_j c_j * e_j. Throws kBudgetExceeded when the consumed total exceeds
// k_max and kNoiseHeadroom when the noise bound would not decode; both
// before computing anything.
Encoding linear_combine(const EncodingContextPtr& ctx, std::span<const Encoding> encodings,
                        std::span<const u64> scalars);

// Minimal-width packing: every residue in bitlen(modulus) bits.
struct Packed {
  std::vector<std::uint8_t> bytes;
  std::size_t bits = 0;
};
Packed pack_source(const RingElement& x);
Packed pack_encoding(const Encoding& e);
// Metadata is not packed: the result is charged the full budget.
Encoding unpack_encoding(const EncodingContextPtr& ctx, const Packed& p);

struct ExpansionReport {
  std::size_t l = 1;          // R_Q elements counted by the formula
  double log2_q = 0;          // source modulus
  double log2_Q = 0;          // target modulus
  double analytic = 0;        // l * log_q(Q)
  double measured = 0;        // packed bits of the (a, b) pair / packed source bits
  double regev_factor = 0;    // n * log_q(Q), n = N
  double improvement = 0;     // regev_factor / analytic
  double pair_gap = 0;        // measured / analytic
};
double analytic_expansion(std::size_t l, double log2_Q, double log2_q);
ExpansionReport expansion_factor(const EncodingContextPtr& ctx);

}  // namespace vfhe::encoding

#endif  // VFHE_ENCODING_HPP_
