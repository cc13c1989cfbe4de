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

#ifndef VFHE_MODULUS_HPP_
#define VFHE_MODULUS_HPP_

#include <cstdint>

namespace vfhe {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Word-sized prime modulus below 2^62 with Barrett reduction of 128-bit
// products.
class Modulus {
 public:
  static constexpr int kMaxBits = 62;

  Modulus() = default;
  explicit Modulus(u64 value);

  u64 value() const noexcept { return value_; }
  int bits() const noexcept { return bits_; }

  u64 reduce(u128 x) const noexcept {
    const u64 x0 = static_cast<u64>(x);
    const u64 x1 = static_cast<u64>(x >> 64);
    const u128 m1 = static_cast<u128>(x1) * ratio_lo_;
    const u128 m2 = static_cast<u128>(x0) * ratio_hi_;
    const u128 lo = (static_cast<u128>(x0) * ratio_lo_) >> 64;
    const u128 mid = lo + static_cast<u64>(m1) + static_cast<u64>(m2);
    const u64 qhat = x1 * ratio_hi_ + static_cast<u64>(m1 >> 64) +
                     static_cast<u64>(m2 >> 64) + static_cast<u64>(mid >> 64);
    u64 r = x0 - qhat * value_;
    while (r >= value_) r -= value_;
    return r;
  }

  u64 reduce(u64 x) const noexcept { return reduce(static_cast<u128>(x)); }

  u64 add(u64 a, u64 b) const noexcept {
    u64 s = a + b;
    return s >= value_ ? s - value_ : s;
  }
  u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + value_ - b; }
  u64 neg(u64 a) const noexcept { return a == 0 ? 0 : value_ - a; }
  u64 mul(u64 a, u64 b) const noexcept {
    return reduce(static_cast<u128>(a) * b);
  }
  u64 pow(u64 base, u64 exp) const noexcept;
  // Inverse of a nonzero residue (modulus is prime).
  u64 inv(u64 a) const;

  // Lift a signed small integer into [0, q).
  u64 from_signed(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(value_);
    return static_cast<u64>(r < 0 ? r + static_cast<std::int64_t>(value_) : r);
  }
  // Centered representative in [-q/2, q/2).
  std::int64_t centered(u64 a) const noexcept {
    return 2 * a >= value_ ? static_cast<std::int64_t>(a) - static_cast<std::int64_t>(value_)
                           : static_cast<std::int64_t>(a);
  }

  friend bool operator==(const Modulus& a, const Modulus& b) { return a.value_ == b.value_; }

 private:
  u64 value_ = 0;
  int bits_ = 0;
  u64 ratio_lo_ = 0;  // floor(2^128 / q), low word
  u64 ratio_hi_ = 0;  // floor(2^128 / q), high word
};

bool is_prime(u64 n);

// Smallest prime p with p == 1 (mod step) and bits(p) == bits, searching
// upward from 2^(bits-1); `skip` primes are passed over first.
u64 find_ntt_prime(int bits, u64 step, int skip = 0);

// A primitive 2n-th root of unity modulo a prime q with q == 1 (mod 2n).
u64 primitive_root_2n(const Modulus& q, u64 n);

}  // namespace vfhe

#endif  // VFHE_MODULUS_HPP_
