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

#ifndef VFHE_COST_MODEL_HPP_
#define VFHE_COST_MODEL_HPP_

#include <cstddef>

#include "vfhe/circuit.hpp"

namespace vfhe::compiler {

// Closed-form constraint ledger for a circuit. Wire bounds are identical
// across the slots of one limb, so the model tracks one scalar bound per
// (wire, limb) and multiplies by the ring degree. Does not touch keys or
// build any constraint; must agree exactly with compile().
r1cs::CostStats model_costs(const FheCircuit& circuit, const CompileParams& params);

// Sequential multiplication chain: acc <- acc * x_i for k fresh operands
// bounded by q, then a final reduction to canonical form.
struct ChainLedger {
  std::size_t multiplications = 0;
  std::size_t reductions = 0;
  std::size_t reduction_bits = 0;
  std::size_t constraints = 0;
  friend bool operator==(const ChainLedger&, const ChainLedger&) = default;
};
ChainLedger chain_measured(const r1cs::FieldParams& field, u64 q, std::size_t k, Schedule schedule);
ChainLedger chain_analytic(const r1cs::FieldParams& field, u64 q, std::size_t k, Schedule schedule);

// Largest number of q-bounded factors whose product stays below p,
// measured by driving the lazy scheduler until it is forced to reduce.
std::size_t measured_capacity(const r1cs::FieldParams& field, u64 q);
// floor(log2 p / log2 q) on bit widths.
std::size_t analytic_capacity(std::size_t p_bits, std::size_t q_bits);

// Reduction bit-cost of k chained products over a q_bits modulus: eager
// single-limb (one q_bits-wide reduction per product) versus lazy with the
// modulus split into `limbs` equal RNS limbs, each reduced once per
// analytic_capacity(p_bits, q_bits / limbs) factors.
struct OverheadReport {
  std::size_t eager_bits = 0;
  std::size_t lazy_bits = 0;
  double ratio = 0.0;
};
OverheadReport reduction_overhead(std::size_t p_bits, std::size_t q_bits, std::size_t limbs,
                                  std::size_t k);

}  // namespace vfhe::compiler

#endif  // VFHE_COST_MODEL_HPP_
