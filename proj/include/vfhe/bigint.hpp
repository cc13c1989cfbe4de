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

#ifndef VFHE_BIGINT_HPP_
#define VFHE_BIGINT_HPP_

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace vfhe {

using BigInt = boost::multiprecision::cpp_int;

// Number of bits needed to write |x| in binary; 0 for x == 0.
inline std::size_t bit_length(const BigInt& x) {
  if (x == 0) return 0;
  return static_cast<std::size_t>(boost::multiprecision::msb(abs(x))) + 1;
}

// Non-negative remainder of x modulo m (m > 0).
inline BigInt mod_floor(const BigInt& x, const BigInt& m) {
  BigInt r = x % m;
  if (r < 0) r += m;
  return r;
}

// Representative of x modulo m in [-m/2, m/2).
inline BigInt mod_centered(const BigInt& x, const BigInt& m) {
  BigInt r = mod_floor(x, m);
  if (2 * r >= m) r -= m;
  return r;
}

inline std::string to_decimal(const BigInt& x) { return x.str(); }

BigInt parse_decimal(const std::string& text);

// log2 of a positive big integer as a double.
double log2_big(const BigInt& x);

}  // namespace vfhe

#endif  // VFHE_BIGINT_HPP_
