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

#ifndef VFHE_CIRCUIT_HPP_
#define VFHE_CIRCUIT_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vfhe/bgv.hpp"
#include "vfhe/builder.hpp"
#include "vfhe/r1cs.hpp"

namespace vfhe::compiler {

enum class OpKind {
  kInputCt,     // client ciphertext, public
  kInputPt,     // server plaintext, private
  kCtAdd,
  kCtSub,
  kCtPtAdd,
  kCtPtSub,
  kCtPtMul,
  kTensor,
  kRelin,
  kModSwitch,
  kNoiseFlood,  // lowered to one zero-encryption check per addend
  kRangeCheck,  // predicate: plaintext coefficients < bound
  kCommitCheck, // predicate: sponge(plaintext) == registered digest
  kOutput,
};

std::string op_kind_name(OpKind k);

struct CircuitOp {
  OpKind kind;
  std::string out;
  std::vector<std::string> args;
  std::uint64_t param = 0;  // flood count or range bound
};

struct CtShape {
  std::size_t parts = 2;
  std::size_t level = 0;
  std::size_t switches = 0;  // modulus switches applied so far
};

class FheCircuit {
 public:
  explicit FheCircuit(std::string name = "circuit") : name_(std::move(name)) {}

  FheCircuit& input_ct(const std::string& name);
  FheCircuit& input_pt(const std::string& name);
  FheCircuit& add(const std::string& out, const std::string& a, const std::string& b);
  FheCircuit& sub(const std::string& out, const std::string& a, const std::string& b);
  FheCircuit& add_pt(const std::string& out, const std::string& ct, const std::string& pt);
  FheCircuit& sub_pt(const std::string& out, const std::string& ct, const std::string& pt);
  FheCircuit& mul_pt(const std::string& out, const std::string& ct, const std::string& pt);
  FheCircuit& tensor(const std::string& out, const std::string& a, const std::string& b);
  FheCircuit& relin(const std::string& out, const std::string& a);
  FheCircuit& mod_switch(const std::string& out, const std::string& a);
  FheCircuit& noise_flood(const std::string& out, const std::string& a, std::size_t count);
  FheCircuit& range_check(const std::string& pt, std::uint64_t bound);
  FheCircuit& commitment_check(const std::string& pt);
  FheCircuit& output(const std::string& ct);

  const std::string& name() const noexcept { return name_; }
  const std::vector<CircuitOp>& ops() const noexcept { return ops_; }

  // Checks dataflow and returns the shape of every ciphertext wire.
  // Throws kDataflow on undefined or mistyped wires.
  std::map<std::string, CtShape> shapes(std::size_t top_level) const;

  std::vector<std::string> ct_inputs() const;
  std::vector<std::string> pt_inputs() const;
  std::vector<std::string> outputs() const;
  std::vector<std::string> commitments() const;

 private:
  FheCircuit& push(OpKind kind, std::string out, std::vector<std::string> args,
                   std::uint64_t param = 0);
  std::string name_;
  std::vector<CircuitOp> ops_;
};

// Public inputs: every input ciphertext, then every output ciphertext
// (slot values, part-major then limb then slot), then one digest per
// commitment check.
struct PublicLayout {
  struct Entry {
    std::string name;
    enum class Kind { kInput, kOutput, kDigest } kind;
    std::size_t parts = 0;
    std::size_t level = 0;
    std::uint32_t offset = 0;
  };
  std::vector<Entry> entries;
  std::uint32_t total = 0;
  std::size_t degree = 0;

  const Entry& find(const std::string& name, Entry::Kind kind) const;
};

struct CompileParams {
  r1cs::FieldParams field = r1cs::FieldParams::bn254();
  bgv::BgvContextPtr ctx;
  const bgv::PublicKey* pk = nullptr;  // required unless count-only
  const bgv::RelinKey* rk = nullptr;   // required by relin ops unless count-only
  BuildOptions options;
};

struct CompiledCircuit {
  r1cs::ConstraintSystem cs;
  r1cs::CostStats stats;
  PublicLayout layout;
};

// Server-side private inputs plus the randomness of every flood op.
struct CircuitAssignment {
  std::map<std::string, bgv::Ciphertext> ct_inputs;
  std::map<std::string, bgv::Plaintext> pt_inputs;
  std::map<std::string, std::vector<bgv::ZeroEncRandomness>> flood;
};

struct WitnessResult {
  std::vector<BigInt> public_inputs;
  std::vector<BigInt> witness;
  // Output ciphertext parts (NTT form) as computed inside the circuit.
  std::map<std::string, std::vector<RingElement>> outputs;
  std::map<std::string, BigInt> digests;
};

PublicLayout layout_for(const FheCircuit& circuit, const bgv::BgvContext& ctx);
CompiledCircuit compile(const FheCircuit& circuit, const CompileParams& params);
// Re-runs the builder with values. Throws kTraceMismatch when the
// assignment does not fit the circuit (unless lenient).
WitnessResult generate_witness(const CompiledCircuit& compiled, const FheCircuit& circuit,
                               const CompileParams& params, const CircuitAssignment& assignment);

// Verifier-side public input vector from ciphertexts and registered digests.
// Throws kTraceMismatch on shape mismatch or non-canonical residues.
std::vector<BigInt> public_inputs(const PublicLayout& layout,
                                  const std::map<std::string, bgv::Ciphertext>& inputs,
                                  const std::map<std::string, std::vector<RingElement>>& outputs,
                                  const std::map<std::string, BigInt>& digests);

// NTT and inverse NTT as dense matrices over Z_{q_i}.
Matrix ntt_matrix(const RingParams& ring, std::size_t limb, Direction dir);

// Sponge digest of a plaintext as registered by CommitmentMatch.
BigInt plaintext_digest(const r1cs::FieldParams& field, const bgv::Plaintext& m);

}  // namespace vfhe::compiler

#endif  // VFHE_CIRCUIT_HPP_
