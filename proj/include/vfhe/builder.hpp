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

#ifndef VFHE_BUILDER_HPP_
#define VFHE_BUILDER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vfhe/bigint.hpp"
#include "vfhe/modulus.hpp"
#include "vfhe/r1cs.hpp"

namespace vfhe::compiler {

// An integer-valued wire: a linear combination whose integer value lies in
// [0, bound). Congruence to the emulated residue is the caller's business.
struct Wire {
  r1cs::LinComb lc;
  BigInt bound = 1;
  BigInt value = 0;     // witness mode only
  bool is_const = false;
};

enum class Schedule { kLazy, kEager };

struct BuildOptions {
  Schedule schedule = Schedule::kLazy;
  bool build_lcs = true;      // false: count constraints without storing them
  bool track_values = false;  // witness generation
  bool lenient = false;       // produce a (failing) witness for bad inputs
};

// Dense N x N matrix over Z_q, row-major.
using Matrix = std::vector<std::vector<u64>>;

// Term of a linear combination whose coefficient is a public constant.
// `coeff_bound` is the bound used for scheduling; using q-1 for every
// key-dependent constant keeps bounds identical across slots.
struct LinTerm {
  Wire* wire;
  BigInt coeff;
  BigInt coeff_bound;
};

class Builder {
 public:
  Builder(const r1cs::FieldParams& field, std::uint32_t num_public, BuildOptions options);

  const BuildOptions& options() const noexcept { return opts_; }
  const BigInt& p() const noexcept { return field_.p(); }
  bool values() const noexcept { return opts_.track_values; }

  Wire public_var(std::uint32_t index, const BigInt& bound, const BigInt& value = 0);
  Wire witness(const BigInt& bound, const BigInt& value = 0);
  Wire constant(const BigInt& c) const;

  // Scheduled arithmetic; `q` is the limb modulus used for any reduction
  // inserted to keep the result bound below p. Operands may be reduced in
  // place (larger bound first), so callers hold wires in stable storage.
  Wire add(Wire& a, Wire& b, u64 q);
  Wire sub(Wire& a, Wire& b, u64 q);  // a - b + K*q with K*q >= bound(b)
  Wire mul(Wire& a, Wire& b, u64 q);
  Wire linear(std::span<const LinTerm> terms, const BigInt& constant, u64 q);
  // out_j = sum_k m[j][k] * (x_k - shift) (mod q), realized as
  // sum_k m[j][k] x_k + C_j with C_j in [0, q). `m` may be null in
  // count-only mode.
  std::vector<Wire> transform(std::vector<Wire>& xs, const Matrix* m, u64 q, u64 shift = 0);

  // Gadgets.
  void range(const Wire& x, std::size_t bits);          // bits + 1 constraints
  void bounded(const Wire& x, const BigInt& bound);     // x < bound
  void congruence(const Wire& e, u64 q);                // e = k*q, k range-checked
  void reduce(Wire& w, u64 q);                          // w <- w mod q
  void reduce_into(Wire& w, u64 q, std::uint32_t public_index);
  void tie(const Wire& a, const Wire& b);               // a == b in F_p
  Wire field_mul(const Wire& a, const Wire& b);         // raw product in F_p
  Wire field_add_const(const Wire& a, const BigInt& c) const;

  // Signed combination without scheduling; the caller states the bound.
  Wire combine(std::span<const std::pair<const Wire*, BigInt>> terms, const BigInt& constant,
               const BigInt& bound) const;

  void set_label(std::string label) { label_ = std::move(label); }
  const std::string& label() const noexcept { return label_; }

  std::size_t ops() const noexcept { return ops_; }
  const r1cs::CostStats& stats() const noexcept { return stats_; }
  std::uint32_t num_witness() const noexcept { return static_cast<std::uint32_t>(witness_count_); }
  std::size_t num_constraints() const noexcept { return stats_.constraints_total; }

  r1cs::ConstraintSystem take_system();
  std::vector<BigInt> witness_values() const;
  std::vector<BigInt> public_values() const;

 private:
  void emit(r1cs::LinComb a, r1cs::LinComb b, r1cs::LinComb c);
  Wire fresh(const BigInt& bound, const BigInt& value);
  void check_bound(const Wire& w) const;
  void finish_op(Wire& w, u64 q);
  // A wire may only grow while it can still be reduced modulo q: its bound
  // and the quotient range proof must both fit below p.
  bool reducible(const BigInt& bound, u64 q) const;
  // Reduces the operand with the largest bound above q; false if none.
  bool reduce_largest(std::span<Wire* const> operands, u64 q);

  r1cs::FieldParams field_;
  std::uint32_t num_public_;
  BuildOptions opts_;
  r1cs::ConstraintSystem cs_;
  std::vector<BigInt> witness_;
  std::size_t witness_count_ = 0;
  std::vector<BigInt> public_;
  std::string label_ = "misc";
  std::size_t ops_ = 0;
  r1cs::CostStats stats_;
};

// Constraints used by one reduction of a value below `bound` modulo q.
std::size_t reduce_cost(const BigInt& bound, u64 q);
std::size_t bounded_cost(const BigInt& bound);

// Algebraic sponge over F_p: state <- P(state + m) with
// P(x) = rounds of (x + c_r)^d, d the smallest exponent coprime to p-1.
struct SpongeParams {
  unsigned exponent = 0;
  std::vector<BigInt> round_constants;
  static SpongeParams for_field(const r1cs::FieldParams& field);
};
BigInt sponge_native(const r1cs::FieldParams& field, std::span<const BigInt> inputs);
Wire sponge_gadget(Builder& b, const r1cs::FieldParams& field, std::span<const Wire> inputs);

}  // namespace vfhe::compiler

#endif  // VFHE_BUILDER_HPP_
