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

#include "vfhe/modulus.hpp"

#include <bit>
#include <string>

#include "vfhe/error.hpp"

namespace vfhe {

Modulus::Modulus(u64 value) : value_(value) {
  if (value < 2 || std::bit_width(value) > kMaxBits) {
    throw Error(ErrorCode::kInvalidParams,
                "modulus must lie in [2, 2^62): " + std::to_string(value));
  }
  bits_ = std::bit_width(value);
  // q is odd or 2 in every use here, so floor((2^128 - 1) / q) == floor(2^128 / q)
  // whenever q is not a power of two.
  u128 ratio = ~static_cast<u128>(0) / value;
  if ((value & (value - 1)) == 0) ratio += 1;
  ratio_lo_ = static_cast<u64>(ratio);
  ratio_hi_ = static_cast<u64>(ratio >> 64);
}

u64 Modulus::pow(u64 base, u64 exp) const noexcept {
  u64 result = 1 % value_;
  base = reduce(base);
  while (exp > 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

u64 Modulus::inv(u64 a) const {
  a = reduce(a);
  if (a == 0) throw Error(ErrorCode::kOutOfRange, "inverse of zero");
  return pow(a, value_ - 2);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  auto mulmod = [n](u64 a, u64 b) { return static_cast<u64>(static_cast<u128>(a) * b % n); };
  auto powmod = [&](u64 b, u64 e) {
    u64 r = 1;
    while (e) {
      if (e & 1) r = mulmod(r, b);
      b = mulmod(b, b);
      e >>= 1;
    }
    return r;
  };
  // Deterministic witness set for all 64-bit n.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 find_ntt_prime(int bits, u64 step, int skip) {
  if (bits < 2 || bits > Modulus::kMaxBits) {
    throw Error(ErrorCode::kInvalidParams, "prime size out of range");
  }
  const u64 lo = 1ULL << (bits - 1);
  const u64 hi = bits == 64 ? ~0ULL : (1ULL << bits);
  u64 candidate = (lo / step) * step + 1;
  if (candidate < lo) candidate += step;
  for (; candidate < hi; candidate += step) {
    if (is_prime(candidate)) {
      if (skip == 0) return candidate;
      --skip;
    }
  }
  throw Error(ErrorCode::kInvalidParams, "no NTT-friendly prime of " + std::to_string(bits) + " bits");
}

u64 primitive_root_2n(const Modulus& q, u64 n) {
  const u64 order = 2 * n;
  if ((q.value() - 1) % order != 0) {
    throw Error(ErrorCode::kInvalidParams,
                std::to_string(q.value()) + " is not 1 mod " + std::to_string(order));
  }
  const u64 cofactor = (q.value() - 1) / order;
  for (u64 x = 2; x < q.value(); ++x) {
    u64 psi = q.pow(x, cofactor);
    // order is a power of two, so psi^n == -1 pins the order at exactly 2n.
    if (q.pow(psi, n) == q.value() - 1) return psi;
  }
  throw Error(ErrorCode::kInvalidParams, "no primitive root found");
}

}  // namespace vfhe
