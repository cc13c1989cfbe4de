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

#include "vfhe/cost_model.hpp"

#include <gtest/gtest.h>

#include "vfhe/error.hpp"
#include "vfhe/workloads.hpp"

namespace vfhe::compiler {
namespace {

using r1cs::FieldParams;

CompileParams count_only(const bgv::BgvParams& bp, const FieldParams& field, Schedule s) {
  CompileParams cp;
  cp.field = field;
  cp.ctx = bgv::BgvContext::create(bp);
  cp.options.schedule = s;
  cp.options.build_lcs = false;
  return cp;
}

FheCircuit extra(const std::string& name) {
  FheCircuit c(name);
  if (name == "relin") {
    c.input_ct("a").input_ct("b").tensor("ab", "a", "b").relin("y", "ab").output("y");
  } else if (name == "mixed") {
    c.input_ct("a").input_ct("b").input_pt("m").sub("d", "a", "b").add("e", "d", "a");
    c.mul_pt("f", "e", "m").tensor("g", "f", "f").sub("h", "b", "g").relin("r", "g");
    c.mod_switch("s", "r").mod_switch("s2", "s").noise_flood("y", "s2", 2).range_check("m", 5);
    c.commitment_check("m").output("y").output("h");
  }
  return c;
}

// Either the stats JSON or the error code, so overflow agreement is
// checked too.
template <typename F>
std::string outcome(F f) {
  try {
    return f().to_json();
  } catch (const Error& e) {
    return std::string(error_code_name(e.code()));
  }
}

TEST(CostModel, MatchesCompileOnDeskWorkloads) {
  std::vector<FheCircuit> circuits;
  for (const auto& n : workloads::names()) circuits.push_back(workloads::circuit(n));
  circuits.push_back(extra("relin"));
  circuits.push_back(extra("mixed"));
  auto narrow = bgv::BgvParams::desk_chain();
  narrow.relin_base_bits = 3;
  for (const auto& bp : {bgv::BgvParams::desk_chain(), narrow}) {
    for (const auto& field : {FieldParams::bn254(), FieldParams::test31()}) {
      for (Schedule s : {Schedule::kLazy, Schedule::kEager}) {
        const auto cp = count_only(bp, field, s);
        for (const auto& c : circuits) {
          SCOPED_TRACE(c.name() + (s == Schedule::kLazy ? " lazy " : " eager ") +
                       std::to_string(field.bit_length()));
          EXPECT_EQ(outcome([&] { return model_costs(c, cp); }),
                    outcome([&] { return compile(c, cp).stats; }));
        }
      }
    }
  }
}

TEST(CostModel, FullBuildAgreesWithCountOnly) {
  auto ctx = bgv::BgvContext::create(bgv::BgvParams::desk_chain());
  auto keys = bgv::keygen(ctx, seed_from_u64(1));
  for (const auto& n : workloads::names()) {
    CompileParams cp;
    cp.ctx = ctx;
    cp.pk = &keys.pk;
    cp.rk = &keys.rk;
    const auto compiled = compile(workloads::circuit(n), cp);
    EXPECT_EQ(model_costs(workloads::circuit(n), cp), compiled.stats);
    EXPECT_EQ(compiled.cs.constraints.size(), compiled.stats.constraints_total);
  }
}

TEST(Capacity, FourSixtyBitFactorsUnder254Bits) {
  const auto f = FieldParams::bn254();
  EXPECT_EQ(f.bit_length(), 254u);
  const u64 q60 = find_ntt_prime(60, 16);
  EXPECT_EQ(bit_length(BigInt(q60)), 60u);
  EXPECT_EQ(measured_capacity(f, q60), 4u);
  EXPECT_EQ(analytic_capacity(254, 60), 4u);
  const u64 q30 = find_ntt_prime(30, 16);
  EXPECT_EQ(measured_capacity(f, q30), 8u);
  EXPECT_EQ(analytic_capacity(254, 30), 8u);
  // 31-bit test field with the desk modulus.
  EXPECT_EQ(measured_capacity(FieldParams::test31(), 257), 3u);
}

TEST(Chain, MeasuredMatchesAnalytic) {
  const auto f = FieldParams::bn254();
  for (u64 q : {find_ntt_prime(60, 16), find_ntt_prime(30, 16), u64{257}}) {
    for (std::size_t k : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 100u}) {
      for (Schedule s : {Schedule::kLazy, Schedule::kEager}) {
        EXPECT_EQ(chain_measured(f, q, k, s), chain_analytic(f, q, k, s)) << q << " " << k;
      }
    }
  }
}

TEST(Overhead, RnsSplitGivesEightfold) {
  for (std::size_t k : {8u, 64u, 1024u}) {
    const auto single = reduction_overhead(254, 60, 1, k);
    EXPECT_EQ(single.ratio, 4.0);
    const auto split = reduction_overhead(254, 60, 2, k);
    EXPECT_EQ(split.eager_bits, k * 60);
    EXPECT_EQ(split.lazy_bits, 2 * (k / 8) * 30);
    EXPECT_EQ(split.ratio, 8.0);
  }
  EXPECT_THROW(reduction_overhead(254, 61, 2, 8), Error);
}

}  // namespace
}  // namespace vfhe::compiler

namespace vfhe::compiler {
namespace {

TEST(PaperScale, MediumCountMatchesModel) {
  const auto cp = count_only(bgv::BgvParams::paper(), FieldParams::bn254(), Schedule::kLazy);
  const auto circuit = workloads::circuit("medium");
  const auto a = compile(circuit, cp);
  const auto b = compile(circuit, cp);
  EXPECT_EQ(a.stats, b.stats);
  EXPECT_EQ(a.stats, model_costs(circuit, cp));
  std::cout << a.stats.to_json() << "\n";
}

}  // namespace
}  // namespace vfhe::compiler
