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

#ifndef VFHE_PRNG_HPP_
#define VFHE_PRNG_HPP_

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace vfhe {

using Seed = std::array<std::uint8_t, 32>;
using Digest = std::array<std::uint8_t, 32>;

// BLAKE2b-256 of the concatenated byte strings.
Digest blake2b(std::initializer_list<std::string_view> parts);
Digest blake2b_bytes(const std::vector<std::uint8_t>& bytes);
std::string digest_hex(const Digest& d);

Seed seed_from_u64(std::uint64_t value);
// Labeled expansion: every role draws from its own sub-seed.
Seed derive_seed(const Seed& parent, std::string_view label);

// Deterministic ChaCha20 keystream generator. Not thread-safe; each role
// owns its instance.
class Prng {
 public:
  explicit Prng(const Seed& seed);
  explicit Prng(std::uint64_t seed) : Prng(seed_from_u64(seed)) {}

  std::uint64_t next_u64();
  std::uint8_t next_byte();
  // Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t uniform(std::uint64_t bound);
  // Uniform in [lo, hi].
  std::int64_t uniform_signed(std::int64_t lo, std::int64_t hi);

 private:
  void refill();

  Seed key_;
  std::uint64_t counter_ = 0;
  std::vector<std::uint8_t> buffer_;
  std::size_t pos_ = 0;
};

}  // namespace vfhe

#endif  // VFHE_PRNG_HPP_
