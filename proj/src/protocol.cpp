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

#include "vfhe/protocol.hpp"

#include <algorithm>

#include "json.hpp"
#include "vfhe/error.hpp"
#include "vfhe/workloads.hpp"

namespace vfhe::protocol {

using compiler::FheCircuit;
using compiler::OpKind;

namespace {

constexpr std::string_view kTagMagic = "VTAG1";
constexpr std::string_view kBundleMagic = "VCTS1";

// Level and correction factor of every ciphertext output, walking the
// circuit the same way the engine updates them.
std::map<std::string, std::pair<std::size_t, u64>> output_shapes(const FheCircuit& c,
                                                                 const bgv::BgvContext& ctx) {
  const auto shapes = c.shapes(ctx.top_level());
  std::map<std::string, u64> corr;
  const Modulus& t = ctx.t_mod();
  for (const auto& op : c.ops()) {
    switch (op.kind) {
      case OpKind::kInputCt: corr[op.out] = 1; break;
      case OpKind::kTensor: corr[op.out] = t.mul(corr.at(op.args[0]), corr.at(op.args[1])); break;
      case OpKind::kModSwitch: {
        const std::size_t level = shapes.at(op.args[0]).level;
        const u64 ql = ctx.params().moduli[level - 1];
        corr[op.out] = t.mul(corr.at(op.args[0]), ql % ctx.t());
        break;
      }
      case OpKind::kCtAdd:
      case OpKind::kCtSub:
      case OpKind::kCtPtAdd:
      case OpKind::kCtPtSub:
      case OpKind::kCtPtMul:
      case OpKind::kRelin:
      case OpKind::kNoiseFlood: corr[op.out] = corr.at(op.args[0]); break;
      default: break;
    }
  }
  std::map<std::string, std::pair<std::size_t, u64>> out;
  for (const auto& name : c.outputs()) out[name] = {shapes.at(name).level, corr.at(name)};
  return out;
}

std::string values_text(const std::vector<BigInt>& v) {
  std::string s;
  for (const auto& x : v) {
    s += to_decimal(x);
    s += ',';
  }
  return s;
}

Digest io_digest(const std::vector<BigInt>& pub) { return blake2b({"vfhe-io", values_text(pub)}); }

std::vector<RingElement> parts_of(const bgv::Ciphertext& c) { return c.parts; }

}  // namespace

compiler::FheCircuit identity_circuit() {
  FheCircuit c("identity");
  c.input_ct("x").output("x");
  return c;
}

VfheKeys kgen_with(const FheCircuit& circuit, const bgv::BgvContextPtr& ctx,
                   std::shared_ptr<const bgv::KeySet> fhe, const KgenOptions& options) {
  auto setup = std::make_shared<Setup>();
  setup->ctx = ctx;
  setup->fhe = fhe;
  setup->circuit = circuit;
  setup->params.field = options.field;
  setup->params.ctx = ctx;
  setup->params.pk = &fhe->pk;
  setup->params.rk = &fhe->rk;
  setup->params.options.schedule = options.schedule;
  setup->compiled = compiler::compile(circuit, setup->params);
  setup->output_shapes = output_shapes(circuit, *ctx);
  setup->circuit_id = blake2b({"vfhe-circuit", circuit.name(), to_decimal(options.field.p()),
                               r1cs::export_r1cs(setup->compiled.cs)});
  VfheKeys keys;
  keys.fhe = std::move(fhe);
  keys.prover.setup = setup;
  keys.verifier.setup = setup;
  for (const auto& name : circuit.commitments()) {
    auto it = options.committed.find(name);
    if (it == options.committed.end()) {
      throw Error(ErrorCode::kInvalidParams, "no committed value for '" + name + "'");
    }
    keys.verifier.digests[name] = compiler::plaintext_digest(options.field, it->second);
  }
  return keys;
}

VfheKeys kgen(const FheCircuit& circuit, const bgv::BgvParams& params, const Seed& seed,
              const KgenOptions& options) {
  auto ctx = bgv::BgvContext::create(params);
  auto fhe = std::make_shared<const bgv::KeySet>(bgv::keygen(ctx, derive_seed(seed, "fhe-keys")));
  return kgen_with(circuit, ctx, std::move(fhe), options);
}

Digest key_fingerprint(const VfheKeys& keys) {
  const auto pk = bgv::serialize(keys.fhe->pk);
  const auto rk = bgv::serialize(keys.fhe->rk);
  std::string digests;
  for (const auto& [name, d] : keys.verifier.digests) digests += name + "=" + to_decimal(d) + ";";
  const auto& id = keys.prover.setup->circuit_id;
  return blake2b({std::string_view(reinterpret_cast<const char*>(pk.data()), pk.size()),
                  std::string_view(reinterpret_cast<const char*>(rk.data()), rk.size()),
                  std::string_view(reinterpret_cast<const char*>(id.data()), id.size()), digests});
}

Encrypted enc(const VfheKeys& keys, const Plaintexts& x, const Seed& seed) {
  const auto& setup = *keys.prover.setup;
  Encrypted out;
  for (const auto& name : setup.circuit.ct_inputs()) {
    auto it = x.find(name);
    if (it == x.end()) throw Error(ErrorCode::kInvalidParams, "missing client input '" + name + "'");
    out.c_x[name] = bgv::encrypt(setup.ctx, keys.fhe->pk, it->second, derive_seed(seed, "enc:" + name));
  }
  out.tau_x = out.c_x;
  return out;
}

std::vector<std::uint8_t> serialize_ciphertexts(const Ciphertexts& cts) {
  std::vector<std::uint8_t> out;
  wire::put_bytes(out, kBundleMagic);
  wire::put_u32(out, static_cast<std::uint32_t>(cts.size()));
  for (const auto& [name, c] : cts) {
    wire::put_u32(out, static_cast<std::uint32_t>(name.size()));
    wire::put_bytes(out, name);
    const auto bytes = bgv::serialize(c);
    wire::put_u32(out, static_cast<std::uint32_t>(bytes.size()));
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  return out;
}

Ciphertexts deserialize_ciphertexts(const bgv::BgvContextPtr& ctx, std::span<const std::uint8_t> in) {
  std::size_t pos = 0;
  wire::expect_bytes(in, pos, kBundleMagic);
  const std::uint32_t count = wire::get_u32(in, pos);
  Ciphertexts out;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t len = wire::get_u32(in, pos);
    if (len > in.size() - pos) throw Error(ErrorCode::kMalformed, "truncated name");
    std::string name(in.begin() + pos, in.begin() + pos + len);
    pos += len;
    const std::uint32_t size = wire::get_u32(in, pos);
    if (size > in.size() - pos) throw Error(ErrorCode::kMalformed, "truncated ciphertext");
    out[name] = bgv::deserialize_ciphertext(ctx, in.subspan(pos, size));
    pos += size;
  }
  if (pos != in.size()) throw Error(ErrorCode::kMalformed, "trailing bytes");
  return out;
}

Digest ciphertexts_digest(const Ciphertexts& cts) { return blake2b_bytes(serialize_ciphertexts(cts)); }

std::vector<std::uint8_t> serialize_tag(const EvalTag& tag) {
  std::vector<std::uint8_t> out;
  wire::put_bytes(out, kTagMagic);
  out.insert(out.end(), tag.circuit_id.begin(), tag.circuit_id.end());
  out.insert(out.end(), tag.io_digest.begin(), tag.io_digest.end());
  wire::put_u32(out, static_cast<std::uint32_t>(tag.witness.size()));
  for (const auto& w : tag.witness) {
    if (w < 0 || bit_length(w) > 256) throw Error(ErrorCode::kOutOfRange, "witness value too wide");
    for (int i = 31; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((w >> (8 * i)) & 0xff));
  }
  return out;
}

EvalTag deserialize_tag(std::span<const std::uint8_t> in) {
  std::size_t pos = 0;
  wire::expect_bytes(in, pos, kTagMagic);
  EvalTag tag;
  if (in.size() - pos < 64) throw Error(ErrorCode::kMalformed, "truncated tag");
  std::copy_n(in.begin() + pos, 32, tag.circuit_id.begin());
  std::copy_n(in.begin() + pos + 32, 32, tag.io_digest.begin());
  pos += 64;
  const std::uint32_t count = wire::get_u32(in, pos);
  if ((in.size() - pos) != std::size_t{count} * 32) throw Error(ErrorCode::kMalformed, "tag length");
  tag.witness.resize(count);
  for (auto& w : tag.witness) {
    w = 0;
    for (int i = 0; i < 32; ++i) w = (w << 8) | in[pos++];
  }
  return tag;
}

Ciphertexts eval_fhe(const bgv::BgvContextPtr& ctx, const bgv::KeySet& keys, const FheCircuit& circuit,
                     const Ciphertexts& c_x, const Plaintexts& w, const Seed& seed,
                     const ServerBehavior& behavior, compiler::CircuitAssignment* assignment) {
  Ciphertexts cts;
  compiler::CircuitAssignment local;
  compiler::CircuitAssignment& asg = assignment ? *assignment : local;
  Ciphertexts outputs;
  for (const auto& op : circuit.ops()) {
    switch (op.kind) {
      case OpKind::kInputCt: {
        auto it = c_x.find(op.out);
        if (it == c_x.end()) throw Error(ErrorCode::kInvalidParams, "missing input '" + op.out + "'");
        cts[op.out] = it->second;
        asg.ct_inputs[op.out] = it->second;
        break;
      }
      case OpKind::kInputPt: {
        auto it = w.find(op.out);
        if (it == w.end()) throw Error(ErrorCode::kInvalidParams, "missing server input '" + op.out + "'");
        asg.pt_inputs[op.out] = it->second;
        break;
      }
      case OpKind::kCtAdd: cts[op.out] = bgv::eval_add(ctx, cts.at(op.args[0]), cts.at(op.args[1])); break;
      case OpKind::kCtSub: cts[op.out] = bgv::eval_sub(ctx, cts.at(op.args[0]), cts.at(op.args[1])); break;
      case OpKind::kCtPtAdd:
        cts[op.out] = bgv::eval_add_pt(ctx, cts.at(op.args[0]), asg.pt_inputs.at(op.args[1]));
        break;
      case OpKind::kCtPtSub:
        cts[op.out] = bgv::eval_sub_pt(ctx, cts.at(op.args[0]), asg.pt_inputs.at(op.args[1]));
        break;
      case OpKind::kCtPtMul:
        cts[op.out] = bgv::eval_mul_pt(ctx, cts.at(op.args[0]), asg.pt_inputs.at(op.args[1]));
        break;
      case OpKind::kTensor: cts[op.out] = bgv::tensor(ctx, cts.at(op.args[0]), cts.at(op.args[1])); break;
      case OpKind::kRelin: cts[op.out] = bgv::relinearize(ctx, cts.at(op.args[0]), &keys.rk); break;
      case OpKind::kModSwitch: cts[op.out] = bgv::mod_switch(ctx, cts.at(op.args[0])); break;
      case OpKind::kNoiseFlood: {
        const bgv::Ciphertext& in = cts.at(op.args[0]);
        bgv::FloodTrace trace;
        bgv::Ciphertext y =
            bgv::noise_flood(ctx, in, keys.pk, op.param, derive_seed(seed, "flood:" + op.out), &trace);
        if (behavior.flood) {
          behavior.flood(op.out, trace.addends);
          const auto key = bgv::public_key_at(keys.pk, in.level, *ctx);
          y.parts = in.parts;
          for (const auto& r : trace.addends) {
            y.parts[0] += bgv::zero_encryption_part(key.p0, r.u, r.e0, ctx->t());
            y.parts[1] += bgv::zero_encryption_part(key.p1, r.u, r.e1, ctx->t());
          }
        }
        asg.flood[op.out] = std::move(trace.addends);
        cts[op.out] = std::move(y);
        break;
      }
      case OpKind::kRangeCheck:
      case OpKind::kCommitCheck: break;  // enforced by the proof only
      case OpKind::kOutput: outputs[op.out] = cts.at(op.out); break;
    }
  }
  return outputs;
}

Evaluated eval(const ProverKey& pk, const Ciphertexts& c_x, const Plaintexts& w, const Seed& seed,
               const ServerBehavior& behavior) {
  const Setup& setup = *pk.setup;
  compiler::CircuitAssignment asg;
  Evaluated out;
  out.c_y = eval_fhe(setup.ctx, *setup.fhe, setup.circuit, c_x, w, seed, behavior, &asg);
  // Out-of-domain inputs still yield a (non-satisfying) witness.
  compiler::CompileParams params = setup.params;
  params.options.lenient = true;
  EvalTag tag;
  tag.circuit_id = setup.circuit_id;
  try {
    const auto wit = compiler::generate_witness(setup.compiled, setup.circuit, params, asg);
    tag.io_digest = io_digest(wit.public_inputs);
    tag.witness = wit.witness;
    for (auto& v : tag.witness) v = mod_floor(v, setup.params.field.p());
  } catch (const Error&) {
    tag.witness.clear();
  }
  out.tau_y = serialize_tag(tag);
  return out;
}

bool verify(const VerifierKey& vk, const Ciphertexts& c_y, const Ciphertexts& tau_x,
            std::span<const std::uint8_t> tau_y) {
  const Setup& setup = *vk.setup;
  try {
    const EvalTag tag = deserialize_tag(tau_y);
    if (tag.circuit_id != setup.circuit_id) return false;
    if (c_y.size() != setup.output_shapes.size()) return false;
    if (tau_x.size() != setup.circuit.ct_inputs().size()) return false;
    std::map<std::string, std::vector<RingElement>> outputs;
    for (const auto& [name, shape] : setup.output_shapes) {
      auto it = c_y.find(name);
      if (it == c_y.end()) return false;
      // The correction factor travels unauthenticated with the ciphertext;
      // it must be the one the circuit implies.
      if (it->second.level != shape.first || it->second.correction != shape.second) return false;
      outputs[name] = parts_of(it->second);
    }
    for (const auto& [name, c] : tau_x) {
      if (c.level != setup.ctx->top_level()) return false;
    }
    const auto pub = compiler::public_inputs(setup.compiled.layout, tau_x, outputs, vk.digests);
    if (io_digest(pub) != tag.io_digest) return false;
    if (tag.witness.size() != setup.compiled.cs.num_witness) return false;
    return r1cs::check_satisfaction(setup.compiled.cs, pub, tag.witness);
  } catch (const Error&) {
    return false;
  }
}

Plaintexts dec(const bgv::SecretKey& sk, const bgv::BgvContextPtr& ctx, const Ciphertexts& c_y) {
  Plaintexts out;
  for (const auto& [name, c] : c_y) out[name] = bgv::decrypt(ctx, sk, c);
  return out;
}

Client::Client(VfheKeys keys)
    : keys_(std::move(keys)),
      identity_(kgen_with(identity_circuit(), keys_.prover.setup->ctx, keys_.fhe,
                          KgenOptions{keys_.prover.setup->params.field, compiler::Schedule::kLazy, {}})) {}

Encrypted Client::encrypt(const Plaintexts& x, const Seed& seed) {
  Encrypted e = enc(keys_, x, seed);
  for (const auto& [name, c] : e.tau_x) issued_.insert(ciphertexts_digest({{"", c}}));
  return e;
}

bool Client::issued(const Ciphertexts& tau_x) const {
  if (tau_x.empty()) return false;
  return std::all_of(tau_x.begin(), tau_x.end(),
                     [&](const auto& kv) { return issued_.count(ciphertexts_digest({{"", kv.second}})) > 0; });
}

std::optional<Plaintexts> Client::oracle_dec(const Ciphertexts& c, const Ciphertexts& tau_x,
                                             std::span<const std::uint8_t> tau_y) const {
  if (!issued(tau_x)) return std::nullopt;
  const bool ok = verify(keys_.verifier, c, tau_x, tau_y) || verify(identity_.verifier, c, tau_x, tau_y);
  if (!ok) return std::nullopt;
  ++decryptions_;
  return dec(keys_.fhe->sk, keys_.prover.setup->ctx, c);
}

Evaluated prove_identity(const VfheKeys& identity, const bgv::Ciphertext& c) {
  return eval(identity.prover, {{"x", c}}, {}, Seed{});
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kHonest: return "honest";
    case Strategy::kFlipOutput: return "flip-output";
    case Strategy::kForgeWitness: return "forge-witness";
    case Strategy::kOversizedInput: return "oversized-input";
    case Strategy::kWrongCircuit: return "wrong-circuit";
    case Strategy::kReplay: return "replay";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(const std::string& s) {
  for (Strategy k : {Strategy::kHonest, Strategy::kFlipOutput, Strategy::kForgeWitness,
                     Strategy::kOversizedInput, Strategy::kWrongCircuit, Strategy::kReplay}) {
    if (strategy_name(k) == s) return k;
  }
  return std::nullopt;
}

const std::vector<Strategy>& adversarial_strategies() {
  static const std::vector<Strategy> s{Strategy::kFlipOutput, Strategy::kForgeWitness,
                                       Strategy::kOversizedInput, Strategy::kWrongCircuit,
                                       Strategy::kReplay};
  return s;
}

std::string ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["strategy"] = strategy;
  j["workload"] = workload;
  j["trials"] = trials;
  j["accepted"] = accepted;
  j["accepted_wrong"] = accepted_wrong;
  j["rejected"] = rejected;
  j["leaked_bits"] = leaked_bits;
  return j.dump();
}

namespace {

// Same inputs, different function: what a server registered for another
// circuit would run.
FheCircuit variant_circuit(const std::string& workload) {
  FheCircuit c(workload + "-variant");
  if (workload == "toy") {
    c.input_ct("x1").input_ct("x2").tensor("y", "x1", "x1").output("y");
  } else if (workload == "small") {
    c.input_ct("x").input_pt("v").input_pt("w");
    c.mul_pt("xw", "x", "w").add_pt("z", "xw", "v").noise_flood("y", "z", 1).output("y");
  } else {
    c.input_ct("x").input_pt("w");
    c.add_pt("d", "x", "w").tensor("sq", "d", "d").mod_switch("ms", "sq");
    c.noise_flood("y", "ms", 1).output("y");
  }
  return c;
}

BigInt random_field_element(Prng& prng, const BigInt& p) {
  BigInt v = 0;
  for (int i = 0; i < 5; ++i) v = (v << 64) | prng.next_u64();
  return v % p;
}

bgv::Ciphertext flip_coefficient(const bgv::Ciphertext& c, Prng& prng) {
  bgv::Ciphertext out = c;
  const std::size_t part = prng.uniform(c.parts.size());
  RingElement& r = out.parts[part];
  const std::size_t limb = prng.uniform(r.num_limbs());
  const std::size_t slot = prng.uniform(r.degree());
  const u64 q = r.params().modulus(limb).value();
  std::vector<std::vector<u64>> limbs;
  for (std::size_t i = 0; i < r.num_limbs(); ++i) {
    limbs.emplace_back(r.limb(i).begin(), r.limb(i).end());
  }
  limbs[limb][slot] = (limbs[limb][slot] + 1 + prng.uniform(q - 1)) % q;
  r = RingElement::from_limbs(r.params_ptr(), std::move(limbs), r.form());
  return out;
}

}  // namespace

ExperimentReport soundness_experiment(const std::string& workload, Strategy strategy, std::size_t trials,
                                      const Seed& seed, const bgv::BgvParams& params) {
  Client client(kgen(workloads::circuit(workload), params, derive_seed(seed, "kgen")));
  const auto& keys = client.keys();
  const auto& ctx = keys.prover.setup->ctx;
  std::optional<VfheKeys> variant;
  if (strategy == Strategy::kWrongCircuit) variant = kgen_with(variant_circuit(workload), ctx, keys.fhe);
  Prng prng(derive_seed(seed, "trials:" + strategy_name(strategy)));
  auto fresh_seed = [&] {
    Seed s;
    for (auto& b : s) b = prng.next_byte();
    return s;
  };
  ExperimentReport report;
  report.strategy = strategy_name(strategy);
  report.workload = workload;
  report.trials = trials;
  std::optional<Evaluated> previous;
  const u64 t = ctx->t();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto inputs = workloads::random_inputs(workload, *ctx, prng);
    const auto expected = workloads::expected_output(workload, inputs, t);
    const Encrypted e = client.encrypt(inputs.client, fresh_seed());
    Evaluated ev;
    switch (strategy) {
      case Strategy::kHonest: ev = eval(keys.prover, e.c_x, inputs.server, fresh_seed()); break;
      case Strategy::kFlipOutput:
        ev = eval(keys.prover, e.c_x, inputs.server, fresh_seed());
        ev.c_y.at("y") = flip_coefficient(ev.c_y.at("y"), prng);
        break;
      case Strategy::kForgeWitness: {
        ev = eval(keys.prover, e.c_x, inputs.server, fresh_seed());
        EvalTag tag = deserialize_tag(ev.tau_y);
        const std::size_t i = prng.uniform(tag.witness.size());
        const BigInt& p = keys.prover.setup->params.field.p();
        BigInt v;
        do {
          v = random_field_element(prng, p);
        } while (v == tag.witness[i]);
        tag.witness[i] = v;
        ev.tau_y = serialize_tag(tag);
        break;
      }
      case Strategy::kOversizedInput: {
        // Out-of-range flooding noise: the decryption-failure oracle
        // pattern, aiming the noise at about q/(2t).
        ServerBehavior b;
        const std::size_t level = keys.prover.setup->output_shapes.at("y").first;
        const BigInt target = ctx->ring(level)->q() / (2 * t);
        const auto big = static_cast<std::int64_t>(std::min<BigInt>(target, BigInt(1) << 40));
        bool flooded = false;
        b.flood = [&](const std::string&, std::vector<bgv::ZeroEncRandomness>& rs) {
          rs[0].e0[prng.uniform(rs[0].e0.size())] = big;
          flooded = true;
        };
        ev = eval(keys.prover, e.c_x, inputs.server, fresh_seed(), b);
        if (!flooded) {
          // No flooding step to abuse: add the oversized t*e term directly.
          auto& y = ev.c_y.at("y");
          std::vector<std::int64_t> noise(ctx->degree(), 0);
          noise[prng.uniform(noise.size())] = big * static_cast<std::int64_t>(t);
          y = bgv::eval_add_raw(ctx, y, RingElement::from_signed(ctx->ring(y.level), noise));
        }
        break;
      }
      case Strategy::kWrongCircuit: {
        ev = eval(variant->prover, e.c_x, inputs.server, fresh_seed());
        // Claim the registered circuit's identity.
        EvalTag tag = deserialize_tag(ev.tau_y);
        tag.circuit_id = keys.prover.setup->circuit_id;
        ev.tau_y = serialize_tag(tag);
        break;
      }
      case Strategy::kReplay: {
        if (!previous) {
          const auto old = workloads::random_inputs(workload, *ctx, prng);
          const Encrypted oe = client.encrypt(old.client, fresh_seed());
          previous = eval(keys.prover, oe.c_x, old.server, fresh_seed());
        }
        ev = *previous;
        previous = eval(keys.prover, e.c_x, inputs.server, fresh_seed());
        break;
      }
    }
    const auto y = client.oracle_dec(ev.c_y, e.tau_x, ev.tau_y);
    if (!y) {
      ++report.rejected;
      continue;
    }
    ++report.accepted;
    if (y->at("y") != expected) {
      ++report.accepted_wrong;
      ++report.leaked_bits;
    }
  }
  return report;
}

FheCircuit predicate_circuit(u64 range_bound) {
  FheCircuit c("predicates");
  c.input_ct("x").input_pt("v").input_pt("w");
  c.range_check("v", range_bound).commitment_check("w");
  c.mul_pt("xv", "x", "v").add_pt("z", "xv", "w").noise_flood("y", "z", 1).output("y");
  return c;
}

PredicateReport predicate_experiment(const std::string& predicate, std::size_t trials, const Seed& seed) {
  if (predicate != "range" && predicate != "commitment") {
    throw Error(ErrorCode::kInvalidParams, "unknown predicate '" + predicate + "'");
  }
  const u64 bound = 8;
  auto ctx = bgv::BgvContext::create(bgv::BgvParams::desk_chain());
  const std::size_t n = ctx->degree();
  const u64 t = ctx->t();
  Prng prng(derive_seed(seed, "predicate:" + predicate));
  auto fresh_seed = [&] {
    Seed s;
    for (auto& b : s) b = prng.next_byte();
    return s;
  };
  bgv::Plaintext committed = bgv::Plaintext::zero(n);
  for (auto& c : committed.coeffs) c = prng.uniform(t);
  KgenOptions opts;
  opts.committed["w"] = committed;
  Client client(kgen(predicate_circuit(bound), bgv::BgvParams::desk_chain(), derive_seed(seed, "kgen"), opts));
  PredicateReport report;
  report.predicate = predicate;
  report.trials = trials;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    bgv::Plaintext x = bgv::Plaintext::zero(n), v = bgv::Plaintext::zero(n);
    for (auto& c : x.coeffs) c = prng.uniform(t);
    for (auto& c : v.coeffs) c = prng.uniform(bound);
    bgv::Plaintext w = committed;
    if (predicate == "range") {
      v.coeffs[prng.uniform(n)] = bound + prng.uniform(t - bound);
    } else {
      const std::size_t k = prng.uniform(n);
      w.coeffs[k] = (w.coeffs[k] + 1 + prng.uniform(t - 1)) % t;
    }
    const Encrypted e = client.encrypt({{"x", x}}, fresh_seed());
    const Evaluated ev = eval(client.keys().prover, e.c_x, {{"v", v}, {"w", w}}, fresh_seed());
    if (client.oracle_dec(ev.c_y, e.tau_x, ev.tau_y)) {
      ++report.accepted;
    } else {
      ++report.rejected;
    }
  }
  return report;
}

Cca1Game::Cca1Game(VfheKeys keys, const Seed& seed) : client_(std::move(keys)), prng_(seed) {}

Encrypted Cca1Game::enc_oracle(const Plaintexts& x) {
  Seed s;
  for (auto& b : s) b = prng_.next_byte();
  return client_.encrypt(x, s);
}

std::optional<Plaintexts> Cca1Game::dec_oracle(const Ciphertexts& c, const Ciphertexts& tau_x,
                                               std::span<const std::uint8_t> tau_y) {
  if (challenged_) return std::nullopt;  // CCA1: no decryption after the challenge
  return client_.oracle_dec(c, tau_x, tau_y);
}

Encrypted Cca1Game::challenge(const Plaintexts& m0, const Plaintexts& m1) {
  if (challenged_) throw Error(ErrorCode::kInvalidParams, "challenge already issued");
  challenged_ = true;
  bit_ = static_cast<int>(prng_.uniform(2));
  return enc_oracle(bit_ == 0 ? m0 : m1);
}

bool Cca1Game::guess(int b) const { return challenged_ && b == bit_; }

}  // namespace vfhe::protocol
