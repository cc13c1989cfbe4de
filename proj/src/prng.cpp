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

#include "vfhe/prng.hpp"

#include <sodium.h>

#include <cstring>

#include "vfhe/error.hpp"

namespace vfhe {
namespace {

struct SodiumInit {
  SodiumInit() {
    if (sodium_init() < 0) throw Error(ErrorCode::kInvalidParams, "libsodium init failed");
  }
};

void ensure_sodium() { static SodiumInit init; }

constexpr std::size_t kBlock = 4096;

}  // namespace

Digest blake2b(std::initializer_list<std::string_view> parts) {
  ensure_sodium();
  crypto_generichash_state state;
  crypto_generichash_init(&state, nullptr, 0, 32);
  for (auto part : parts) {
    crypto_generichash_update(&state, reinterpret_cast<const unsigned char*>(part.data()),
                              part.size());
  }
  Digest out;
  crypto_generichash_final(&state, out.data(), out.size());
  return out;
}

Digest blake2b_bytes(const std::vector<std::uint8_t>& bytes) {
  return blake2b({std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size())});
}

std::string digest_hex(const Digest& d) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (auto b : d) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 15]);
  }
  return out;
}

Seed seed_from_u64(std::uint64_t value) {
  char le[8];
  for (int i = 0; i < 8; ++i) le[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  return blake2b({"vfhe-seed", std::string_view(le, 8)});
}

Seed derive_seed(const Seed& parent, std::string_view label) {
  return blake2b({std::string_view(reinterpret_cast<const char*>(parent.data()), parent.size()),
                  "/", label});
}

Prng::Prng(const Seed& seed) : key_(seed) { ensure_sodium(); }

void Prng::refill() {
  unsigned char nonce[crypto_stream_chacha20_NONCEBYTES] = {};
  std::memcpy(nonce, &counter_, sizeof(counter_));
  ++counter_;
  buffer_.assign(kBlock, 0);
  crypto_stream_chacha20(buffer_.data(), buffer_.size(), nonce, key_.data());
  pos_ = 0;
}

std::uint8_t Prng::next_byte() {
  if (pos_ >= buffer_.size()) refill();
  return buffer_[pos_++];
}

std::uint64_t Prng::next_u64() {
  if (pos_ + 8 > buffer_.size()) refill();
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buffer_[pos_ + i]) << (8 * i);
  pos_ += 8;
  return v;
}

std::uint64_t Prng::uniform(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kOutOfRange, "uniform bound must be positive");
  const std::uint64_t limit = ~0ULL - (~0ULL % bound);
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

std::int64_t Prng::uniform_signed(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(uniform(static_cast<std::uint64_t>(hi - lo) + 1));
}

}  // namespace vfhe
