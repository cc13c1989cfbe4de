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

#ifndef VFHE_R1CS_HPP_
#define VFHE_R1CS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vfhe/bigint.hpp"

namespace vfhe::r1cs {

// Prime field Z_p hosting the constraint system.
class FieldParams {
 public:
  static FieldParams create(const BigInt& p);
  // 254-bit prime (the BN254 scalar field).
  static FieldParams bn254();
  // 2^31 - 1, for fast tests.
  static FieldParams test31();

  const BigInt& p() const noexcept { return p_; }
  std::size_t bit_length() const noexcept { return bits_; }
  BigInt reduce(const BigInt& x) const { return mod_floor(x, p_); }

 private:
  BigInt p_;
  std::size_t bits_ = 0;
};

using Var = std::uint32_t;
inline constexpr Var kOne = 0;  // variable 0 is the constant 1

struct Term {
  Var var;
  BigInt coeff;  // in [1, p)
  friend bool operator==(const Term&, const Term&) = default;
};

// Sparse linear combination, terms sorted by variable with nonzero
// coefficients reduced mod p.
class LinComb {
 public:
  LinComb() = default;
  static LinComb variable(Var v);
  static LinComb constant(const BigInt& c, const BigInt& p);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  // this += c * other (mod p).
  void add_scaled(const LinComb& other, const BigInt& c, const BigInt& p);
  void add_term(Var v, const BigInt& c, const BigInt& p);
  BigInt evaluate(std::span<const BigInt> z, const BigInt& p) const;

  // Builds from already-normalized terms (used by import).
  static LinComb from_terms(std::vector<Term> terms);

  friend bool operator==(const LinComb&, const LinComb&) = default;

 private:
  std::vector<Term> terms_;
};

struct Constraint {
  LinComb a, b, c;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct ConstraintSystem {
  BigInt p;
  std::uint32_t num_public = 0;
  std::uint32_t num_witness = 0;
  std::vector<Constraint> constraints;

  std::size_t num_vars() const { return 1 + std::size_t{num_public} + num_witness; }
  friend bool operator==(const ConstraintSystem&, const ConstraintSystem&) = default;
};

// Full assignment z = (1, public..., witness...). Throws kSizeMismatch on
// wrong lengths; values outside [0, p) make the check fail.
bool check_satisfaction(const ConstraintSystem& cs, std::span<const BigInt> public_inputs,
                        std::span<const BigInt> witness);
// Index of the first violated constraint, or -1.
std::int64_t first_unsatisfied(const ConstraintSystem& cs, std::span<const BigInt> public_inputs,
                               std::span<const BigInt> witness);

// Text format:
//   VR1CS1
//   p <decimal>
//   counts <num_public> <num_witness> <num_constraints> <nnz A> <nnz B> <nnz C>
//   A / B / C sections of "<constraint> <var> <coeff>" lines.
std::string export_r1cs(const ConstraintSystem& cs);
ConstraintSystem import_r1cs(const std::string& text);

struct CostStats {
  std::size_t constraints_total = 0;
  std::map<std::string, std::size_t> constraints_by_gadget;
  std::size_t reductions_count = 0;
  std::size_t reductions_bits_total = 0;
  std::size_t eager_baseline_count = 0;
  double lazy_ratio = 0.0;

  std::string to_json() const;
  friend bool operator==(const CostStats&, const CostStats&) = default;
};

}  // namespace vfhe::r1cs

#endif  // VFHE_R1CS_HPP_
