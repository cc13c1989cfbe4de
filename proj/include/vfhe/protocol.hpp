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

#ifndef VFHE_PROTOCOL_HPP_
#define VFHE_PROTOCOL_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vfhe/bgv.hpp"
#include "vfhe/circuit.hpp"

// Verifiable FHE: BGV evaluation plus an R1CS relation
//   c_y = Eval_pk(f, c_x, w)  and  w in W  and  phi(w)
// checked by a witness-satisfaction backend. The backend reveals the
// witness (it is not zero-knowledge); a real proving system would replace
// `prove`/`check` without changing the protocol surface.
namespace vfhe::protocol {

using Ciphertexts = std::map<std::string, bgv::Ciphertext>;
using Plaintexts = std::map<std::string, bgv::Plaintext>;

// Public artifacts of one registered circuit.
struct Setup {
  bgv::BgvContextPtr ctx;
  std::shared_ptr<const bgv::KeySet> fhe;  // owner of the keys in `params`
  compiler::FheCircuit circuit;
  compiler::CompileParams params;  // pk/rk point into the owning keys
  compiler::CompiledCircuit compiled;
  Digest circuit_id{};
  // Output shape implied by the circuit: level and decryption correction.
  std::map<std::string, std::pair<std::size_t, u64>> output_shapes;
};

struct ProverKey {
  std::shared_ptr<const Setup> setup;
};

struct VerifierKey {
  std::shared_ptr<const Setup> setup;
  std::map<std::string, BigInt> digests;  // registered commitments
};

struct VfheKeys {
  // FHE keys are heap-held so the compiled system's key pointers stay valid.
  std::shared_ptr<const bgv::KeySet> fhe;
  ProverKey prover;
  VerifierKey verifier;
};

struct KgenOptions {
  r1cs::FieldParams field = r1cs::FieldParams::bn254();
  compiler::Schedule schedule = compiler::Schedule::kLazy;
  // Server inputs the client commits to, for commitment_check predicates.
  Plaintexts committed;
};

VfheKeys kgen(const compiler::FheCircuit& circuit, const bgv::BgvParams& params, const Seed& seed,
              const KgenOptions& options = {});
// Keys for another circuit over the same FHE keys.
VfheKeys kgen_with(const compiler::FheCircuit& circuit, const bgv::BgvContextPtr& ctx,
                   std::shared_ptr<const bgv::KeySet> fhe, const KgenOptions& options = {});
// Identity circuit over a single ciphertext: lets a fresh encryption be
// submitted to a verifying decryption oracle.
compiler::FheCircuit identity_circuit();
Digest key_fingerprint(const VfheKeys& keys);

struct Encrypted {
  Ciphertexts c_x;
  Ciphertexts tau_x;  // equal to c_x
};
Encrypted enc(const VfheKeys& keys, const Plaintexts& x, const Seed& seed);

struct EvalTag {
  Digest circuit_id{};
  Digest io_digest{};
  std::vector<BigInt> witness;
};
std::vector<std::uint8_t> serialize_tag(const EvalTag& tag);
EvalTag deserialize_tag(std::span<const std::uint8_t> in);

// Deviations a malicious server may apply during evaluation.
struct ServerBehavior {
  // Rewrites the flooding randomness before it is used.
  std::function<void(const std::string&, std::vector<bgv::ZeroEncRandomness>&)> flood;
};

struct Evaluated {
  Ciphertexts c_y;
  std::vector<std::uint8_t> tau_y;
};
// Plain FHE evaluation of the circuit, no proof. Fills `assignment` with
// the trace a witness needs when given.
Ciphertexts eval_fhe(const bgv::BgvContextPtr& ctx, const bgv::KeySet& keys,
                     const compiler::FheCircuit& circuit, const Ciphertexts& c_x, const Plaintexts& w,
                     const Seed& seed, const ServerBehavior& behavior = {},
                     compiler::CircuitAssignment* assignment = nullptr);

// Runs the circuit on the engine and proves the trace. Never throws for
// out-of-domain server inputs: a tag is produced and verification fails.
Evaluated eval(const ProverKey& pk, const Ciphertexts& c_x, const Plaintexts& w, const Seed& seed,
               const ServerBehavior& behavior = {});

bool verify(const VerifierKey& vk, const Ciphertexts& c_y, const Ciphertexts& tau_x,
            std::span<const std::uint8_t> tau_y);
Plaintexts dec(const bgv::SecretKey& sk, const bgv::BgvContextPtr& ctx, const Ciphertexts& c_y);

// Client holding the secret key. Decrypts only verified results, and only
// for input tags it issued itself.
class Client {
 public:
  explicit Client(VfheKeys keys);
  const VfheKeys& keys() const noexcept { return keys_; }
  const VfheKeys& identity_keys() const noexcept { return identity_; }

  Encrypted encrypt(const Plaintexts& x, const Seed& seed);
  std::optional<Plaintexts> oracle_dec(const Ciphertexts& c, const Ciphertexts& tau_x,
                                       std::span<const std::uint8_t> tau_y) const;
  std::size_t decryptions() const noexcept { return decryptions_; }
  // The issued-input registry is client state; these persist it.
  std::vector<Digest> issued_digests() const { return {issued_.begin(), issued_.end()}; }
  void restore_issued(const std::vector<Digest>& digests) { issued_.insert(digests.begin(), digests.end()); }

 private:
  bool issued(const Ciphertexts& tau_x) const;

  VfheKeys keys_;
  VfheKeys identity_;
  std::set<Digest> issued_;
  mutable std::size_t decryptions_ = 0;
};

// Prover side of the identity circuit for a fresh ciphertext.
Evaluated prove_identity(const VfheKeys& identity, const bgv::Ciphertext& c);

Digest ciphertexts_digest(const Ciphertexts& cts);
std::vector<std::uint8_t> serialize_ciphertexts(const Ciphertexts& cts);
Ciphertexts deserialize_ciphertexts(const bgv::BgvContextPtr& ctx, std::span<const std::uint8_t> in);

enum class Strategy { kHonest, kFlipOutput, kForgeWitness, kOversizedInput, kWrongCircuit, kReplay };
std::string strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(const std::string& s);
const std::vector<Strategy>& adversarial_strategies();

struct ExperimentReport {
  std::string strategy;
  std::string workload;
  std::size_t trials = 0;
  std::size_t accepted = 0;
  std::size_t accepted_wrong = 0;
  std::size_t rejected = 0;
  // Decryption-failure outcomes observable by the server: trials whose
  // result the client accepted and decrypted to a wrong value.
  std::size_t leaked_bits = 0;
  std::string to_json() const;
};
ExperimentReport soundness_experiment(const std::string& workload, Strategy strategy,
                                      std::size_t trials, const Seed& seed,
                                      const bgv::BgvParams& params = bgv::BgvParams::desk_chain());

// Predicate workload: y = x * v + w with range_check(v < bound) and a
// commitment to w.
compiler::FheCircuit predicate_circuit(u64 range_bound);

// Server inputs violating a registered predicate: "range" draws v with a
// coefficient in [bound, t); "commitment" changes w after registration.
struct PredicateReport {
  std::string predicate;
  std::size_t trials = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};
PredicateReport predicate_experiment(const std::string& predicate, std::size_t trials,
                                     const Seed& seed);

// IND-CCA1 game plumbing: pre-challenge the adversary may use the
// encryption and verified-decryption oracles; post-challenge only
// encryption. No advantage is measured.
class Cca1Game {
 public:
  Cca1Game(VfheKeys keys, const Seed& seed);
  Encrypted enc_oracle(const Plaintexts& x);
  std::optional<Plaintexts> dec_oracle(const Ciphertexts& c, const Ciphertexts& tau_x,
                                       std::span<const std::uint8_t> tau_y);
  Encrypted challenge(const Plaintexts& m0, const Plaintexts& m1);
  bool guess(int b) const;

 private:
  Client client_;
  Prng prng_;
  int bit_ = 0;
  bool challenged_ = false;
};

}  // namespace vfhe::protocol

#endif  // VFHE_PROTOCOL_HPP_
