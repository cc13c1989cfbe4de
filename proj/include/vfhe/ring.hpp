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

#ifndef VFHE_RING_HPP_
#define VFHE_RING_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "vfhe/bigint.hpp"
#include "vfhe/modulus.hpp"
#include "vfhe/prng.hpp"

namespace vfhe {

// Precomputed powers of a primitive 2N-th root for one RNS limb, stored in
// bit-reversed order so the transform runs in place.
struct NttTables {
  u64 psi = 0;
  std::vector<u64> psi_rev;      // psi^brv(i)
  std::vector<u64> psi_inv_rev;  // psi^-brv(i)
  u64 n_inv = 0;
};

// Parameters of R_q = Z_q[X]/(X^N + 1) with q = q_1 * ... * q_L.
//
// Instances are immutable and shared by every element built on them.
class RingParams {
 public:
  static std::shared_ptr<const RingParams> create(std::size_t degree, std::vector<u64> moduli);

  std::size_t degree() const noexcept { return degree_; }
  std::size_t num_limbs() const noexcept { return moduli_.size(); }
  const Modulus& modulus(std::size_t i) const { return moduli_.at(i); }
  const std::vector<Modulus>& moduli() const noexcept { return moduli_; }
  std::vector<u64> modulus_values() const;
  // Product of all limbs.
  const BigInt& q() const noexcept { return q_; }
  const NttTables& ntt_tables(std::size_t i) const { return tables_.at(i); }

  // q / q_i and its inverse modulo q_i, used by CRT merging.
  const BigInt& punctured(std::size_t i) const { return punctured_.at(i); }
  u64 punctured_inv(std::size_t i) const { return punctured_inv_.at(i); }

  // Same ring with the first `limbs` moduli only.
  std::shared_ptr<const RingParams> prefix(std::size_t limbs) const;

  bool same_as(const RingParams& other) const noexcept {
    return degree_ == other.degree_ && moduli_ == other.moduli_;
  }

 private:
  RingParams() = default;

  std::size_t degree_ = 0;
  int log_degree_ = 0;
  std::vector<Modulus> moduli_;
  BigInt q_;
  std::vector<NttTables> tables_;
  std::vector<BigInt> punctured_;
  std::vector<u64> punctured_inv_;
};

using RingParamsPtr = std::shared_ptr<const RingParams>;

enum class Form : std::uint8_t { kCoefficient = 0, kNtt = 1 };
enum class Direction { kForward, kInverse };

// An element of R_q held as L limbs of N residues, all fully reduced.
class RingElement {
 public:
  RingElement() = default;
  static RingElement zero(RingParamsPtr params, Form form = Form::kCoefficient);
  // Constant polynomial c (every slot equals c in NTT form).
  static RingElement constant(RingParamsPtr params, const BigInt& c, Form form = Form::kCoefficient);
  static RingElement from_signed(RingParamsPtr params, std::span<const std::int64_t> coeffs,
                                 Form form = Form::kCoefficient);
  // Coefficients given modulo q (each in [0, q)); CRT-split into limbs.
  static RingElement from_big(RingParamsPtr params, std::span<const BigInt> coeffs);
  // Direct limb construction; residues are validated.
  static RingElement from_limbs(RingParamsPtr params, std::vector<std::vector<u64>> limbs, Form form);

  const RingParams& params() const { return *params_; }
  const RingParamsPtr& params_ptr() const noexcept { return params_; }
  Form form() const noexcept { return form_; }
  std::size_t degree() const { return params_->degree(); }
  std::size_t num_limbs() const { return limbs_.size(); }

  std::span<const u64> limb(std::size_t i) const { return limbs_.at(i); }
  std::span<u64> mutable_limb(std::size_t i) { return limbs_.at(i); }
  const std::vector<std::vector<u64>>& limbs() const noexcept { return limbs_; }

  // CRT-merged coefficients in [0, q); requires coefficient form.
  std::vector<BigInt> to_big() const;
  // CRT-merged coefficients in [-q/2, q/2); requires coefficient form.
  std::vector<BigInt> to_centered() const;

  RingElement to_ntt() const;
  RingElement to_coeff() const;

  // Drop all limbs beyond the first `limbs` (reduction modulo a factor of q).
  RingElement restrict_to(const RingParamsPtr& prefix) const;

  // Every residue lies in [0, q_i) and every limb has N entries.
  bool is_reduced() const;

  RingElement& operator+=(const RingElement& other);
  RingElement& operator-=(const RingElement& other);
  RingElement operator-() const;
  RingElement scalar_mul(const BigInt& c) const;
  RingElement scalar_mul_u64(u64 c) const;

  friend bool operator==(const RingElement& a, const RingElement& b);

 private:
  RingElement(RingParamsPtr params, Form form);
  void check_compatible(const RingElement& other) const;

  RingParamsPtr params_;
  std::vector<std::vector<u64>> limbs_;
  Form form_ = Form::kCoefficient;
};

RingElement ring_add(const RingElement& a, const RingElement& b);
RingElement ring_sub(const RingElement& a, const RingElement& b);
// Slot-wise product in NTT form. Two coefficient-form inputs are multiplied
// through the transform and the product is returned in coefficient form.
RingElement ring_mul(const RingElement& a, const RingElement& b);
RingElement ntt_transform(const RingElement& x, Direction direction);

inline RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
inline RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }
inline RingElement operator*(const RingElement& a, const RingElement& b) { return ring_mul(a, b); }

// In-place negacyclic transforms on one limb.
void ntt_forward_inplace(std::span<u64> values, const Modulus& q, const NttTables& tables);
void ntt_inverse_inplace(std::span<u64> values, const Modulus& q, const NttTables& tables);

// Slot k of the forward transform evaluates the input at psi^(2 brv(k) + 1).
std::size_t bit_reverse(std::size_t x, int bits);

std::vector<u64> crt_split(const RingParams& params, const BigInt& x);
BigInt crt_merge(const RingParams& params, std::span<const u64> residues);

struct Distribution {
  enum class Kind { kTernary, kCenteredBinomial, kUniform };
  Kind kind = Kind::kTernary;
  int k = 0;  // CenteredBinomial parameter; support [-k, k]

  static Distribution ternary() { return {Kind::kTernary, 1}; }
  static Distribution centered_binomial(int k) { return {Kind::kCenteredBinomial, k}; }
  static Distribution uniform() { return {Kind::kUniform, 0}; }
  // Largest |coefficient| for the bounded distributions.
  std::int64_t bound() const { return kind == Kind::kTernary ? 1 : k; }
};

// Small signed coefficients for the bounded distributions.
std::vector<std::int64_t> sample_small(std::size_t n, const Distribution& dist, Prng& prng);
RingElement sample_poly(const RingParamsPtr& params, const Distribution& dist, Prng& prng);
RingElement sample_poly(const RingParamsPtr& params, const Distribution& dist, const Seed& seed);

// Binary envelope: "VFHE", version, N, L, moduli, form, residues (LE u64).
inline constexpr std::uint8_t kFormatVersion = 1;
void write_ring_element(std::vector<std::uint8_t>& out, const RingElement& x);
// Reads one element starting at `pos`, advancing it. Reuses `params` when
// the header matches it, otherwise builds new parameters.
RingElement read_ring_element(std::span<const std::uint8_t> in, std::size_t& pos,
                              const RingParamsPtr& params = nullptr);

namespace wire {
void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v);
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v);
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v);
void put_bytes(std::vector<std::uint8_t>& out, std::string_view bytes);
std::uint8_t get_u8(std::span<const std::uint8_t> in, std::size_t& pos);
std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t& pos);
std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t& pos);
void expect_bytes(std::span<const std::uint8_t> in, std::size_t& pos, std::string_view bytes);
}  // namespace wire

}  // namespace vfhe

#endif  // VFHE_RING_HPP_
