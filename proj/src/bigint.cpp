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

#include "vfhe/bigint.hpp"

#include <cmath>

#include "vfhe/error.hpp"

namespace vfhe {

BigInt parse_decimal(const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::kMalformed, "empty integer literal");
  std::size_t start = text[0] == '-' ? 1 : 0;
  if (start == text.size()) throw Error(ErrorCode::kMalformed, "bare sign");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw Error(ErrorCode::kMalformed, "not a decimal integer: " + text);
    }
  }
  return BigInt(text);
}

double log2_big(const BigInt& x) {
  if (x <= 0) throw Error(ErrorCode::kOutOfRange, "log2 of non-positive value");
  std::size_t bits = bit_length(x);
  if (bits <= 60) return std::log2(static_cast<double>(x.convert_to<std::uint64_t>()));
  // Keep the top 60 bits for the mantissa.
  BigInt top = x >> (bits - 60);
  return std::log2(static_cast<double>(top.convert_to<std::uint64_t>())) +
         static_cast<double>(bits - 60);
}

}  // namespace vfhe
