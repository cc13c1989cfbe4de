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

#ifndef VFHE_BGV_HPP_
#define VFHE_BGV_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vfhe/bigint.hpp"
#include "vfhe/prng.hpp"
#include "vfhe/ring.hpp"

namespace vfhe::bgv {

struct BgvParams {
  std::size_t degree = 8;
  std::vector<u64> moduli;  // modulus chain; mod_switch drops from the back
  u64 plain_modulus = 17;
  Distribution error = Distribution::centered_binomial(1);
  int relin_base_bits = 16;  // digit width inside each RNS limb
  int flood_bits = 4;        // flood bound = 2^flood_bits * error bound

  // N=8, q = 257 * 241, t = 17. Insecure, for tests only.
  static BgvParams desk();
  // Desk ring with a third limb (193) so a tensor product and a modulus
  // switch fit the worst-case noise bound. Insecure, for tests only.
  static BgvParams desk_chain();
  // N=8192 with 45 + 46 + 46 bit limbs.
  static BgvParams paper();
};

// Immutable scheme context: the ring at every level of the chain.
class BgvContext {
 public:
  static std::shared_ptr<const BgvContext> create(const BgvParams& params);

  const BgvParams& params() const noexcept { return params_; }
  std::size_t degree() const noexcept { return params_.degree; }
  u64 t() const noexcept { return params_.plain_modulus; }
  const Modulus& t_mod() const noexcept { return t_mod_; }
  std::size_t top_level() const noexcept { return rings_.size(); }
  // Ring with `level` limbs, 1 <= level <= top_level().
  const RingParamsPtr& ring(std::size_t level) const;
  const RingParamsPtr& top_ring() const { return rings_.back(); }
  std::int64_t error_bound() const { return params_.error.bound(); }
  std::int64_t flood_bound() const { return error_bound() << params_.flood_bits; }

 private:
  BgvContext() = default;
  BgvParams params_;
  Modulus t_mod_;
  std::vector<RingParamsPtr> rings_;
};

using BgvContextPtr = std::shared_ptr<const BgvContext>;

// Polynomial over Z_t with coefficients in [0, t).
struct Plaintext {
  std::vector<u64> coeffs;

  static Plaintext zero(std::size_t n) { return {std::vector<u64>(n, 0)}; }
  static Plaintext constant(std::size_t n, u64 c) {
    Plaintext p = zero(n);
    p.coeffs[0] = c;
    return p;
  }
  friend bool operator==(const Plaintext&, const Plaintext&) = default;
};

struct SecretKey {
  std::vector<std::int64_t> coeffs;  // ternary
  RingElement s;                     // NTT form, top level

  RingElement at_level(std::size_t level, const BgvContext& ctx) const;
};

// (p0, p1) = (a*s + t*e, -a) in NTT form at the top level.
struct PublicKey {
  RingElement p0;
  RingElement p1;
};

// One key pair per (limb j, digit k): (a*s + t*e + 2^(w k) g_j s^2, -a),
// where g_j is the CRT basis element for limb j.
struct RelinKey {
  struct Pair {
    std::size_t limb = 0;
    std::size_t digit = 0;
    RingElement k0;
    RingElement k1;
  };
  std::vector<Pair> pairs;
  int base_bits = 16;
};

struct Ciphertext {
  std::vector<RingElement> parts;  // NTT form, all at ring(level)
  std::size_t level = 0;
  // Conservative bound on ||phase - message||_inf (the t*e part).
  BigInt noise_bound;
  // Decryption multiplies the recovered value by this factor (mod t);
  // modulus switching scales the message by q_L^{-1}.
  u64 correction = 1;

  std::size_t degree() const { return parts.size() - 1; }
  // Build an arbitrary (possibly malformed) ciphertext from raw parts.
  static Ciphertext crafted(std::vector<RingElement> parts, const BgvContext& ctx);
};

struct KeySet {
  SecretKey sk;
  PublicKey pk;
  RelinKey rk;
};

// Randomness of one zero encryption: (p0*u + t*e0, p1*u + t*e1).
struct ZeroEncRandomness {
  std::vector<std::int64_t> u;
  std::vector<std::int64_t> e0;
  std::vector<std::int64_t> e1;
};

KeySet keygen(const BgvContextPtr& ctx, const Seed& seed);
// Keys for a caller-chosen ternary secret (degenerate keys in tests).
KeySet keygen_with_secret(const BgvContextPtr& ctx, std::vector<std::int64_t> s_coeffs,
                          const Seed& seed);

PublicKey public_key_at(const PublicKey& pk, std::size_t level, const BgvContext& ctx);

// Plaintext embedded as coefficients in [0, t).
RingElement embed(const Plaintext& m, const RingParamsPtr& ring);

Ciphertext encrypt(const BgvContextPtr& ctx, const PublicKey& pk, const Plaintext& m,
                   const Seed& seed);
Plaintext decrypt(const BgvContextPtr& ctx, const SecretKey& sk, const Ciphertext& c);

// Centered phase c0 + c1*s + c2*s^2 over Z (coefficient-wise in [-q/2, q/2)).
std::vector<BigInt> phase(const BgvContextPtr& ctx, const SecretKey& sk, const Ciphertext& c);
// ||phase - center_t(phase)||_inf, i.e. the magnitude of the t*e part.
BigInt exact_noise(const BgvContextPtr& ctx, const SecretKey& sk, const Ciphertext& c);
// Largest noise that still decrypts at `level`: q/2 - t/2 - 1.
BigInt noise_capacity(const BgvContext& ctx, std::size_t level);
bool within_capacity(const BgvContext& ctx, const Ciphertext& c);

Ciphertext eval_add(const BgvContextPtr& ctx, const Ciphertext& a, const Ciphertext& b);
Ciphertext eval_sub(const BgvContextPtr& ctx, const Ciphertext& a, const Ciphertext& b);
Ciphertext eval_add_pt(const BgvContextPtr& ctx, const Ciphertext& c, const Plaintext& m);
Ciphertext eval_sub_pt(const BgvContextPtr& ctx, const Ciphertext& c, const Plaintext& m);
Ciphertext eval_mul_pt(const BgvContextPtr& ctx, const Ciphertext& c, const Plaintext& m);
// Adds an arbitrary ring element to c0 with no bound bookkeeping beyond its
// infinity norm; this is what a malicious server can do.
Ciphertext eval_add_raw(const BgvContextPtr& ctx, const Ciphertext& c, const RingElement& r);
Ciphertext tensor(const BgvContextPtr& ctx, const Ciphertext& a, const Ciphertext& b);
Ciphertext relinearize(const BgvContextPtr& ctx, const Ciphertext& c, const RelinKey* rk);

struct ModSwitchTrace {
  // Per part and coefficient: delta' in (-q_L/2, q_L/2] with
  // t*delta' == c (mod q_L).
  std::vector<std::vector<std::int64_t>> delta;
};
Ciphertext mod_switch(const BgvContextPtr& ctx, const Ciphertext& c,
                      ModSwitchTrace* trace = nullptr);

struct FloodTrace {
  std::vector<ZeroEncRandomness> addends;
};
// Adds `count` fresh encryptions of zero with flood-sized errors.
Ciphertext noise_flood(const BgvContextPtr& ctx, const Ciphertext& c, const PublicKey& pk,
                       std::size_t count, const Seed& seed, FloodTrace* trace = nullptr);
RingElement zero_encryption_part(const RingElement& pk_part, const std::vector<std::int64_t>& u,
                                 const std::vector<std::int64_t>& e, u64 t);
BigInt flood_noise_bound(const BgvContext& ctx, std::size_t count);
BigInt fresh_noise_bound(const BgvContext& ctx);

// Decryption oracle: returns nullopt for "bottom".
using DecryptionOracle = std::function<std::optional<Plaintext>(const Ciphertext&)>;
DecryptionOracle unprotected_oracle(BgvContextPtr ctx, SecretKey sk);

// Decrypts (0, 1) and lifts [s]_t back to {-1, 0, 1}.
std::optional<std::vector<std::int64_t>> attack_trivial_ct(const BgvContextPtr& ctx,
                                                           const DecryptionOracle& oracle);
// Sums the first-digit key pair of every limb (the CRT basis sums to one),
// yielding an encryption of s^2, and asks the oracle for it.
std::optional<Plaintext> attack_relin_key(const BgvContextPtr& ctx, const DecryptionOracle& oracle,
                                          const RelinKey& rk);
Ciphertext relin_key_as_ciphertext(const BgvContextPtr& ctx, const RelinKey& rk);
// [s^2]_t computed directly from the key, for comparison.
Plaintext secret_square_mod_t(const BgvContextPtr& ctx, const SecretKey& sk);

// Reaction oracle: true when the client observes a decryption failure.
using ReactionOracle = std::function<bool(const Ciphertext&)>;
// A client that checks the measured noise against the bound it expects
// from an honest evaluation and aborts when it is exceeded.
ReactionOracle noise_reaction_client(BgvContextPtr ctx, SecretKey sk, BigInt honest_limit);

struct ProbeOutcome {
  Ciphertext result;
  bool failure_observed = false;
};
// f(x, w1, w2) = x * w1 + w2 with w1 = 0 and an arbitrary (possibly
// oversized) w2 ring element.
ProbeOutcome attack_overflow_probe(const BgvContextPtr& ctx, const Ciphertext& client_ct,
                                   const RingElement& w2, const ReactionOracle& reaction);

// Binary files: ring envelope plus a type tag.
enum class ObjectTag : std::uint8_t {
  kSecretKey = 1,
  kPublicKey = 2,
  kRelinKey = 3,
  kCiphertext = 4,
};
std::vector<std::uint8_t> serialize(const SecretKey& sk);
std::vector<std::uint8_t> serialize(const PublicKey& pk);
std::vector<std::uint8_t> serialize(const RelinKey& rk);
std::vector<std::uint8_t> serialize(const Ciphertext& c);
SecretKey deserialize_secret_key(const BgvContextPtr& ctx, std::span<const std::uint8_t> in);
PublicKey deserialize_public_key(const BgvContextPtr& ctx, std::span<const std::uint8_t> in);
RelinKey deserialize_relin_key(const BgvContextPtr& ctx, std::span<const std::uint8_t> in);
Ciphertext deserialize_ciphertext(const BgvContextPtr& ctx, std::span<const std::uint8_t> in);

}  // namespace vfhe::bgv

#endif  // VFHE_BGV_HPP_
