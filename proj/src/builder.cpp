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

#include "vfhe/builder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "vfhe/error.hpp"
#include "vfhe/prng.hpp"

namespace vfhe::compiler {

using r1cs::LinComb;

namespace {

BigInt pow2(std::size_t bits) { return BigInt(1) << bits; }

bool is_pow2(const BigInt& x) { return x > 0 && (x & (x - 1)) == 0; }

}  // namespace

Builder::Builder(const r1cs::FieldParams& field, std::uint32_t num_public, BuildOptions options)
    : field_(field), num_public_(num_public), opts_(options) {
  if (opts_.track_values) public_.assign(num_public, BigInt(0));
}

Wire Builder::public_var(std::uint32_t index, const BigInt& bound, const BigInt& value) {
  if (index >= num_public_) throw Error(ErrorCode::kOutOfRange, "public index out of range");
  Wire w;
  if (opts_.build_lcs) w.lc = LinComb::variable(1 + index);
  w.bound = bound;
  if (opts_.track_values) {
    w.value = value;
    public_[index] = mod_floor(value, p());
  }
  check_bound(w);
  return w;
}

Wire Builder::fresh(const BigInt& bound, const BigInt& value) {
  const auto var = static_cast<r1cs::Var>(1 + num_public_ + witness_count_);
  ++witness_count_;
  Wire w;
  if (opts_.build_lcs) w.lc = LinComb::variable(var);
  w.bound = bound;
  if (opts_.track_values) {
    w.value = value;
    witness_.push_back(mod_floor(value, p()));
  }
  return w;
}

Wire Builder::witness(const BigInt& bound, const BigInt& value) {
  Wire w = fresh(bound, value);
  check_bound(w);
  return w;
}

Wire Builder::constant(const BigInt& c) const {
  Wire w;
  if (opts_.build_lcs) w.lc = LinComb::constant(c, p());
  w.bound = c + 1;
  w.value = c;
  w.is_const = true;
  return w;
}

void Builder::check_bound(const Wire& w) const {
  if (!opts_.track_values || opts_.lenient) return;
  if (w.value < 0 || w.value >= w.bound) {
    throw Error(ErrorCode::kTraceMismatch, "wire value escapes its bound");
  }
}

void Builder::emit(LinComb a, LinComb b, LinComb c) {
  ++stats_.constraints_total;
  ++stats_.constraints_by_gadget[label_];
  if (opts_.build_lcs) cs_.constraints.push_back({std::move(a), std::move(b), std::move(c)});
}

bool Builder::reducible(const BigInt& bound, u64 q) const {
  return bound < p() && pow2(bit_length((bound - 1) / q)) * q + q < p();
}

bool Builder::reduce_largest(std::span<Wire* const> operands, u64 q) {
  Wire* pick = nullptr;
  for (Wire* w : operands) {
    if (w->is_const || w->bound <= q) continue;
    if (pick == nullptr || w->bound > pick->bound) pick = w;
  }
  if (pick == nullptr) return false;
  reduce(*pick, q);
  return true;
}

void Builder::finish_op(Wire& w, u64 q) {
  ++ops_;
  check_bound(w);
  if (opts_.schedule == Schedule::kEager) reduce(w, q);
}

Wire Builder::add(Wire& a, Wire& b, u64 q) {
  Wire* ops[] = {&a, &b};
  while (!reducible(a.bound + b.bound - 1, q)) {
    if (!reduce_largest(ops, q)) throw Error(ErrorCode::kFieldOverflow, "addition overflows the field");
  }
  Wire out;
  if (opts_.build_lcs) {
    out.lc = a.lc;
    out.lc.add_scaled(b.lc, 1, p());
  }
  out.bound = a.bound + b.bound - 1;
  out.value = a.value + b.value;
  finish_op(out, q);
  return out;
}

Wire Builder::sub(Wire& a, Wire& b, u64 q) {
  Wire* ops[] = {&a, &b};
  auto offset = [&] { return ((b.bound - 1 + q - 1) / q) * q; };
  while (!reducible(a.bound + offset(), q)) {
    if (!reduce_largest(ops, q)) throw Error(ErrorCode::kFieldOverflow, "subtraction overflows the field");
  }
  const BigInt off = offset();
  Wire out;
  if (opts_.build_lcs) {
    out.lc = a.lc;
    out.lc.add_scaled(b.lc, -1, p());
    out.lc.add_term(r1cs::kOne, off, p());
  }
  out.bound = a.bound + off;
  out.value = a.value - b.value + off;
  finish_op(out, q);
  return out;
}

Wire Builder::mul(Wire& a, Wire& b, u64 q) {
  Wire* ops[] = {&a, &b};
  auto bound = [&] { return (a.bound - 1) * (b.bound - 1) + 1; };
  while (!reducible(bound(), q)) {
    if (!reduce_largest(ops, q)) throw Error(ErrorCode::kFieldOverflow, "product overflows the field");
  }
  Wire out;
  out.bound = bound();
  out.value = a.value * b.value;
  if (a.is_const || b.is_const) {
    const Wire& c = a.is_const ? a : b;
    const Wire& x = a.is_const ? b : a;
    if (opts_.build_lcs) out.lc.add_scaled(x.lc, c.value, p());
    out.is_const = x.is_const;
  } else {
    const std::string saved = label_;
    label_ = "mul";
    Wire z = fresh(out.bound, out.value);
    emit(a.lc, b.lc, z.lc);
    label_ = saved;
    out.lc = std::move(z.lc);
  }
  finish_op(out, q);
  return out;
}

Wire Builder::linear(std::span<const LinTerm> terms, const BigInt& constant, u64 q) {
  std::vector<Wire*> ops;
  for (const auto& t : terms) ops.push_back(t.wire);
  auto bound = [&] {
    BigInt b = constant + 1;
    for (const auto& t : terms) b += t.coeff_bound * (t.wire->bound - 1);
    return b;
  };
  while (!reducible(bound(), q)) {
    if (!reduce_largest(ops, q)) throw Error(ErrorCode::kFieldOverflow, "linear map overflows the field");
  }
  Wire out;
  out.bound = bound();
  out.value = constant;
  if (opts_.build_lcs) out.lc = LinComb::constant(constant, p());
  for (const auto& t : terms) {
    if (opts_.build_lcs) out.lc.add_scaled(t.wire->lc, t.coeff, p());
    if (opts_.track_values) out.value += t.coeff * t.wire->value;
  }
  finish_op(out, q);
  return out;
}

std::vector<Wire> Builder::transform(std::vector<Wire>& xs, const Matrix* m, u64 q, u64 shift) {
  const std::size_t n = xs.size();
  std::vector<Wire*> ops;
  for (auto& x : xs) ops.push_back(&x);
  const BigInt qm1 = q - 1;
  auto bound = [&] {
    BigInt b = shift != 0 ? BigInt(q) : BigInt(1);
    for (const auto& x : xs) b += qm1 * (x.bound - 1);
    return b;
  };
  while (!reducible(bound(), q)) {
    if (!reduce_largest(ops, q)) throw Error(ErrorCode::kFieldOverflow, "transform overflows the field");
  }
  const BigInt out_bound = bound();
  const bool need_matrix = opts_.build_lcs || opts_.track_values;
  if (need_matrix && m == nullptr) throw Error(ErrorCode::kInvalidParams, "transform matrix required");
  std::vector<Wire> out(n);
  const Modulus mod(q);
  for (std::size_t j = 0; j < n; ++j) {
    Wire& w = out[j];
    w.bound = out_bound;
    if (need_matrix) {
      const auto& row = (*m)[j];
      u64 rowsum = 0;
      for (u64 v : row) rowsum = mod.add(rowsum, v);
      const u64 c = mod.neg(mod.mul(rowsum, shift % q));
      w.value = c;
      if (opts_.build_lcs) w.lc = LinComb::constant(c, p());
      for (std::size_t k = 0; k < n; ++k) {
        if (opts_.build_lcs) w.lc.add_scaled(xs[k].lc, row[k], p());
        if (opts_.track_values) w.value += BigInt(row[k]) * xs[k].value;
      }
    }
    finish_op(w, q);
  }
  return out;
}

void Builder::range(const Wire& x, std::size_t bits) {
  if (pow2(bits) >= p()) throw Error(ErrorCode::kFieldOverflow, "range exceeds field capacity");
  const BigInt xv = opts_.track_values ? mod_floor(x.value, p()) : BigInt(0);
  LinComb recompose;
  for (std::size_t i = 0; i < bits; ++i) {
    const BigInt bit = opts_.track_values ? BigInt((xv >> i) & 1) : BigInt(0);
    Wire b = fresh(2, bit);
    if (opts_.build_lcs) {
      LinComb bm1 = b.lc;
      bm1.add_term(r1cs::kOne, -1, p());
      recompose.add_scaled(b.lc, pow2(i), p());
      emit(b.lc, std::move(bm1), LinComb());
    } else {
      emit({}, {}, {});
    }
  }
  if (opts_.build_lcs) recompose.add_scaled(x.lc, -1, p());
  emit(std::move(recompose), LinComb::constant(1, p()), LinComb());
}

void Builder::bounded(const Wire& x, const BigInt& bound) {
  if (is_pow2(bound)) {
    range(x, bit_length(bound) - 1);
    return;
  }
  const std::size_t bits = bit_length(bound - 1);
  range(x, bits);
  Wire y;
  if (opts_.build_lcs) {
    y.lc = LinComb::constant(bound - 1, p());
    y.lc.add_scaled(x.lc, -1, p());
  }
  y.value = bound - 1 - x.value;
  range(y, bits);
}

std::size_t bounded_cost(const BigInt& bound) {
  if (is_pow2(bound)) return bit_length(bound);  // (bits) + 1
  return 2 * (bit_length(bound - 1) + 1);
}

namespace {

std::size_t quotient_bits(const BigInt& bound, u64 q) { return bit_length((bound - 1) / q); }

}  // namespace

std::size_t reduce_cost(const BigInt& bound, u64 q) {
  return bounded_cost(BigInt(q)) + 2 + quotient_bits(bound, q);
}

void Builder::congruence(const Wire& e, u64 q) {
  const std::size_t kb = quotient_bits(e.bound, q);
  if (e.bound >= p() || pow2(kb) * q + q >= p()) {
    throw Error(ErrorCode::kFieldOverflow, "congruence does not fit the field");
  }
  const BigInt kv = opts_.track_values ? BigInt(e.value / q) : BigInt(0);
  Wire k = fresh(pow2(kb), kv);
  LinComb a;
  if (opts_.build_lcs) {
    a = e.lc;
    a.add_scaled(k.lc, -BigInt(q), p());
  }
  emit(std::move(a), LinComb::constant(1, p()), LinComb());
  range(k, kb);
}

void Builder::reduce(Wire& w, u64 q) {
  const std::string saved = label_;
  label_ = "mod_reduce";
  Wire r = fresh(q, opts_.track_values ? mod_floor(w.value, BigInt(q)) : BigInt(0));
  bounded(r, q);
  const std::pair<const Wire*, BigInt> terms[] = {{&w, 1}, {&r, -1}};
  congruence(combine(terms, 0, w.bound), q);
  ++stats_.reductions_count;
  stats_.reductions_bits_total += bit_length(BigInt(q));
  label_ = saved;
  w = std::move(r);
}

void Builder::reduce_into(Wire& w, u64 q, std::uint32_t public_index) {
  Wire r = public_var(public_index, q, opts_.track_values ? mod_floor(w.value, BigInt(q)) : BigInt(0));
  bounded(r, q);
  const std::pair<const Wire*, BigInt> terms[] = {{&w, 1}, {&r, -1}};
  congruence(combine(terms, 0, w.bound), q);
  ++stats_.reductions_count;
  stats_.reductions_bits_total += bit_length(BigInt(q));
  w = std::move(r);
}

void Builder::tie(const Wire& a, const Wire& b) {
  LinComb d;
  if (opts_.build_lcs) {
    d = a.lc;
    d.add_scaled(b.lc, -1, p());
  }
  emit(std::move(d), LinComb::constant(1, p()), LinComb());
}

Wire Builder::field_mul(const Wire& a, const Wire& b) {
  Wire z = fresh(p(), opts_.track_values ? BigInt((a.value * b.value) % p()) : BigInt(0));
  emit(a.lc, b.lc, z.lc);
  return z;
}

Wire Builder::field_add_const(const Wire& a, const BigInt& c) const {
  Wire out = a;
  if (opts_.build_lcs) out.lc.add_term(r1cs::kOne, c, p());
  out.value = mod_floor(a.value + c, p());
  out.bound = p();
  out.is_const = false;
  return out;
}

Wire Builder::combine(std::span<const std::pair<const Wire*, BigInt>> terms, const BigInt& constant,
                      const BigInt& bound) const {
  Wire out;
  out.bound = bound;
  out.value = constant;
  if (opts_.build_lcs) out.lc = LinComb::constant(constant, p());
  for (const auto& [w, c] : terms) {
    if (opts_.build_lcs) out.lc.add_scaled(w->lc, c, p());
    out.value += c * w->value;
  }
  return out;
}

r1cs::ConstraintSystem Builder::take_system() {
  cs_.p = p();
  cs_.num_public = num_public_;
  cs_.num_witness = static_cast<std::uint32_t>(witness_count_);
  return std::move(cs_);
}

std::vector<BigInt> Builder::witness_values() const { return witness_; }

std::vector<BigInt> Builder::public_values() const { return public_; }

SpongeParams SpongeParams::for_field(const r1cs::FieldParams& field) {
  SpongeParams sp;
  const BigInt pm1 = field.p() - 1;
  for (unsigned d = 3;; d += 2) {
    if (boost::multiprecision::gcd(pm1, BigInt(d)) == 1) {
      sp.exponent = d;
      break;
    }
  }
  // ceil(log_d p) rounds.
  const double rounds = static_cast<double>(field.bit_length()) / std::log2(sp.exponent);
  const auto n = static_cast<std::size_t>(std::ceil(rounds));
  const std::string p_text = to_decimal(field.p());
  for (std::size_t r = 0; r < n; ++r) {
    const std::string idx = std::to_string(r);
    const Digest d = blake2b({"vfhe-sponge", p_text, idx});
    BigInt c = 0;
    for (auto byte : d) c = (c << 8) | byte;
    sp.round_constants.push_back(r == 0 ? BigInt(0) : BigInt(c % field.p()));
  }
  return sp;
}

namespace {

const SpongeParams& cached_sponge(const r1cs::FieldParams& field) {
  static thread_local std::vector<std::pair<BigInt, SpongeParams>> cache;
  for (const auto& [p, sp] : cache) {
    if (p == field.p()) return sp;
  }
  cache.emplace_back(field.p(), SpongeParams::for_field(field));
  return cache.back().second;
}

}  // namespace

BigInt sponge_native(const r1cs::FieldParams& field, std::span<const BigInt> inputs) {
  const auto& sp = cached_sponge(field);
  const BigInt& p = field.p();
  BigInt state = 0;
  for (const auto& m : inputs) {
    BigInt x = mod_floor(state + m, p);
    for (const auto& c : sp.round_constants) {
      x = boost::multiprecision::powm(BigInt((x + c) % p), BigInt(sp.exponent), p);
    }
    state = x;
  }
  return state;
}

Wire sponge_gadget(Builder& b, const r1cs::FieldParams& field, std::span<const Wire> inputs) {
  const auto& sp = cached_sponge(field);
  Wire state = b.constant(0);
  state.is_const = false;
  for (const auto& m : inputs) {
    const std::pair<const Wire*, BigInt> terms[] = {{&state, 1}, {&m, 1}};
    Wire x = b.combine(terms, 0, field.p());
    x.value = mod_floor(x.value, field.p());
    for (const auto& c : sp.round_constants) {
      const Wire y = b.field_add_const(x, c);
      Wire acc = y;
      const int top = std::bit_width(sp.exponent) - 1;
      for (int bit = top - 1; bit >= 0; --bit) {
        acc = b.field_mul(acc, acc);
        if ((sp.exponent >> bit) & 1U) acc = b.field_mul(acc, y);
      }
      x = std::move(acc);
    }
    state = std::move(x);
  }
  return state;
}

}  // namespace vfhe::compiler
