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

#include "vfhe/ring.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

#include "vfhe/error.hpp"

namespace vfhe {

std::size_t bit_reverse(std::size_t x, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

std::shared_ptr<const RingParams> RingParams::create(std::size_t degree, std::vector<u64> moduli) {
  if (degree < 4 || !std::has_single_bit(degree)) {
    throw Error(ErrorCode::kInvalidParams, "N must be a power of two >= 4");
  }
  if (moduli.empty()) throw Error(ErrorCode::kInvalidParams, "at least one modulus required");
  if (std::set<u64>(moduli.begin(), moduli.end()).size() != moduli.size()) {
    throw Error(ErrorCode::kInvalidParams, "moduli must be pairwise distinct");
  }
  auto params = std::shared_ptr<RingParams>(new RingParams());
  params->degree_ = degree;
  params->log_degree_ = std::countr_zero(degree);
  params->q_ = 1;
  for (u64 m : moduli) {
    if (!is_prime(m)) throw Error(ErrorCode::kInvalidParams, std::to_string(m) + " is not prime");
    if (m % (2 * degree) != 1) {
      throw Error(ErrorCode::kInvalidParams, std::to_string(m) + " is not 1 mod 2N");
    }
    Modulus q(m);
    params->moduli_.push_back(q);
    params->q_ *= m;

    NttTables t;
    t.psi = primitive_root_2n(q, degree);
    const u64 psi_inv = q.inv(t.psi);
    t.psi_rev.resize(degree);
    t.psi_inv_rev.resize(degree);
    u64 pw = 1, pw_inv = 1;
    for (std::size_t i = 0; i < degree; ++i) {
      const std::size_t r = bit_reverse(i, params->log_degree_);
      t.psi_rev[r] = pw;
      t.psi_inv_rev[r] = pw_inv;
      pw = q.mul(pw, t.psi);
      pw_inv = q.mul(pw_inv, psi_inv);
    }
    t.n_inv = q.inv(degree % m);
    params->tables_.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    BigInt punct = params->q_ / moduli[i];
    params->punctured_.push_back(punct);
    const Modulus& qi = params->moduli_[i];
    params->punctured_inv_.push_back(qi.inv(static_cast<u64>(punct % moduli[i])));
  }
  return params;
}

std::vector<u64> RingParams::modulus_values() const {
  std::vector<u64> out;
  for (const auto& m : moduli_) out.push_back(m.value());
  return out;
}

std::shared_ptr<const RingParams> RingParams::prefix(std::size_t limbs) const {
  if (limbs == 0 || limbs > moduli_.size()) {
    throw Error(ErrorCode::kInvalidParams, "prefix length out of range");
  }
  auto values = modulus_values();
  values.resize(limbs);
  return create(degree_, values);
}

void ntt_forward_inplace(std::span<u64> a, const Modulus& q, const NttTables& tables) {
  const std::size_t n = a.size();
  std::size_t t = n;
  for (std::size_t m = 1; m < n; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j1 = 2 * i * t;
      const u64 s = tables.psi_rev[m + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const u64 u = a[j];
        const u64 v = q.mul(a[j + t], s);
        a[j] = q.add(u, v);
        a[j + t] = q.sub(u, v);
      }
    }
  }
}

void ntt_inverse_inplace(std::span<u64> a, const Modulus& q, const NttTables& tables) {
  const std::size_t n = a.size();
  std::size_t t = 1;
  for (std::size_t m = n; m > 1; m >>= 1) {
    std::size_t j1 = 0;
    const std::size_t h = m >> 1;
    for (std::size_t i = 0; i < h; ++i) {
      const u64 s = tables.psi_inv_rev[h + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const u64 u = a[j];
        const u64 v = a[j + t];
        a[j] = q.add(u, v);
        a[j + t] = q.mul(q.sub(u, v), s);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (auto& x : a) x = q.mul(x, tables.n_inv);
}

std::vector<u64> crt_split(const RingParams& params, const BigInt& x) {
  if (x < 0 || x >= params.q()) throw Error(ErrorCode::kOutOfRange, "value outside [0, q)");
  std::vector<u64> out;
  out.reserve(params.num_limbs());
  for (const auto& m : params.moduli()) out.push_back(static_cast<u64>(x % m.value()));
  return out;
}

BigInt crt_merge(const RingParams& params, std::span<const u64> residues) {
  if (residues.size() != params.num_limbs()) {
    throw Error(ErrorCode::kSizeMismatch, "expected one residue per limb");
  }
  BigInt acc = 0;
  for (std::size_t i = 0; i < residues.size(); ++i) {
    const Modulus& qi = params.modulus(i);
    if (residues[i] >= qi.value()) throw Error(ErrorCode::kOutOfRange, "residue not reduced");
    acc += BigInt(qi.mul(residues[i], params.punctured_inv(i))) * params.punctured(i);
  }
  return acc % params.q();
}

RingElement::RingElement(RingParamsPtr params, Form form)
    : params_(std::move(params)), form_(form) {
  limbs_.assign(params_->num_limbs(), std::vector<u64>(params_->degree(), 0));
}

RingElement RingElement::zero(RingParamsPtr params, Form form) {
  return RingElement(std::move(params), form);
}

RingElement RingElement::constant(RingParamsPtr params, const BigInt& c, Form form) {
  RingElement out(params, form);
  const BigInt reduced = mod_floor(c, params->q());
  for (std::size_t i = 0; i < out.num_limbs(); ++i) {
    const u64 r = static_cast<u64>(reduced % params->modulus(i).value());
    if (form == Form::kNtt) {
      std::fill(out.limbs_[i].begin(), out.limbs_[i].end(), r);
    } else {
      out.limbs_[i][0] = r;
    }
  }
  return out;
}

RingElement RingElement::from_signed(RingParamsPtr params, std::span<const std::int64_t> coeffs,
                                     Form form) {
  if (coeffs.size() != params->degree()) {
    throw Error(ErrorCode::kSizeMismatch, "expected N coefficients");
  }
  RingElement out(params, Form::kCoefficient);
  for (std::size_t i = 0; i < out.num_limbs(); ++i) {
    const Modulus& q = params->modulus(i);
    for (std::size_t j = 0; j < coeffs.size(); ++j) out.limbs_[i][j] = q.from_signed(coeffs[j]);
  }
  return form == Form::kNtt ? out.to_ntt() : out;
}

RingElement RingElement::from_big(RingParamsPtr params, std::span<const BigInt> coeffs) {
  if (coeffs.size() != params->degree()) {
    throw Error(ErrorCode::kSizeMismatch, "expected N coefficients");
  }
  RingElement out(params, Form::kCoefficient);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    auto residues = crt_split(*params, coeffs[j]);
    for (std::size_t i = 0; i < residues.size(); ++i) out.limbs_[i][j] = residues[i];
  }
  return out;
}

RingElement RingElement::from_limbs(RingParamsPtr params, std::vector<std::vector<u64>> limbs,
                                    Form form) {
  RingElement out(params, form);
  if (limbs.size() != params->num_limbs()) throw Error(ErrorCode::kSizeMismatch, "limb count");
  for (std::size_t i = 0; i < limbs.size(); ++i) {
    if (limbs[i].size() != params->degree()) throw Error(ErrorCode::kSizeMismatch, "limb length");
    for (u64 v : limbs[i]) {
      if (v >= params->modulus(i).value()) throw Error(ErrorCode::kOutOfRange, "residue not reduced");
    }
  }
  out.limbs_ = std::move(limbs);
  return out;
}

std::vector<BigInt> RingElement::to_big() const {
  if (form_ != Form::kCoefficient) {
    throw Error(ErrorCode::kFormMismatch, "CRT merge needs coefficient form");
  }
  std::vector<BigInt> out(degree());
  std::vector<u64> residues(num_limbs());
  for (std::size_t j = 0; j < degree(); ++j) {
    for (std::size_t i = 0; i < num_limbs(); ++i) residues[i] = limbs_[i][j];
    out[j] = crt_merge(*params_, residues);
  }
  return out;
}

std::vector<BigInt> RingElement::to_centered() const {
  auto out = to_big();
  for (auto& c : out) c = mod_centered(c, params_->q());
  return out;
}

RingElement RingElement::to_ntt() const { return ntt_transform(*this, Direction::kForward); }
RingElement RingElement::to_coeff() const { return ntt_transform(*this, Direction::kInverse); }

RingElement RingElement::restrict_to(const RingParamsPtr& prefix) const {
  if (prefix->degree() != degree() || prefix->num_limbs() > num_limbs()) {
    throw Error(ErrorCode::kParamMismatch, "not a prefix ring");
  }
  for (std::size_t i = 0; i < prefix->num_limbs(); ++i) {
    if (!(prefix->modulus(i) == params_->modulus(i))) {
      throw Error(ErrorCode::kParamMismatch, "not a prefix ring");
    }
  }
  RingElement out(prefix, form_);
  for (std::size_t i = 0; i < prefix->num_limbs(); ++i) out.limbs_[i] = limbs_[i];
  return out;
}

bool RingElement::is_reduced() const {
  if (!params_ || limbs_.size() != params_->num_limbs()) return false;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    if (limbs_[i].size() != params_->degree()) return false;
    const u64 q = params_->modulus(i).value();
    for (u64 v : limbs_[i]) {
      if (v >= q) return false;
    }
  }
  return true;
}

void RingElement::check_compatible(const RingElement& other) const {
  if (!params_ || !other.params_ || !params_->same_as(*other.params_)) {
    throw Error(ErrorCode::kParamMismatch, "ring parameters differ");
  }
  if (form_ != other.form_) throw Error(ErrorCode::kFormMismatch, "operands in different forms");
}

RingElement& RingElement::operator+=(const RingElement& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const Modulus& q = params_->modulus(i);
    for (std::size_t j = 0; j < limbs_[i].size(); ++j) limbs_[i][j] = q.add(limbs_[i][j], other.limbs_[i][j]);
  }
  return *this;
}

RingElement& RingElement::operator-=(const RingElement& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const Modulus& q = params_->modulus(i);
    for (std::size_t j = 0; j < limbs_[i].size(); ++j) limbs_[i][j] = q.sub(limbs_[i][j], other.limbs_[i][j]);
  }
  return *this;
}

RingElement RingElement::operator-() const {
  RingElement out = *this;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const Modulus& q = params_->modulus(i);
    for (auto& v : out.limbs_[i]) v = q.neg(v);
  }
  return out;
}

RingElement RingElement::scalar_mul(const BigInt& c) const {
  RingElement out = *this;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const Modulus& q = params_->modulus(i);
    const u64 ci = static_cast<u64>(mod_floor(c, BigInt(q.value())));
    for (auto& v : out.limbs_[i]) v = q.mul(v, ci);
  }
  return out;
}

RingElement RingElement::scalar_mul_u64(u64 c) const { return scalar_mul(BigInt(c)); }

bool operator==(const RingElement& a, const RingElement& b) {
  if (!a.params_ || !b.params_) return !a.params_ && !b.params_;
  return a.params_->same_as(*b.params_) && a.form_ == b.form_ && a.limbs_ == b.limbs_;
}

RingElement ring_add(const RingElement& a, const RingElement& b) { return a + b; }
RingElement ring_sub(const RingElement& a, const RingElement& b) { return a - b; }

RingElement ring_mul(const RingElement& a, const RingElement& b) {
  if (!a.params_ptr() || !b.params_ptr() || !a.params().same_as(b.params())) {
    throw Error(ErrorCode::kParamMismatch, "ring parameters differ");
  }
  if (a.form() != b.form()) throw Error(ErrorCode::kFormMismatch, "operands in different forms");
  if (a.form() == Form::kCoefficient) return ring_mul(a.to_ntt(), b.to_ntt()).to_coeff();
  RingElement out = a;
  for (std::size_t i = 0; i < a.num_limbs(); ++i) {
    const Modulus& q = a.params().modulus(i);
    auto dst = out.mutable_limb(i);
    auto src = b.limb(i);
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = q.mul(dst[j], src[j]);
  }
  return out;
}

RingElement ntt_transform(const RingElement& x, Direction direction) {
  const Form expected = direction == Direction::kForward ? Form::kCoefficient : Form::kNtt;
  if (x.form() != expected) {
    throw Error(ErrorCode::kFormMismatch, direction == Direction::kForward
                                              ? "forward NTT needs coefficient form"
                                              : "inverse NTT needs NTT form");
  }
  std::vector<std::vector<u64>> limbs = x.limbs();
  for (std::size_t i = 0; i < limbs.size(); ++i) {
    const auto& q = x.params().modulus(i);
    const auto& tables = x.params().ntt_tables(i);
    if (direction == Direction::kForward) {
      ntt_forward_inplace(limbs[i], q, tables);
    } else {
      ntt_inverse_inplace(limbs[i], q, tables);
    }
  }
  return RingElement::from_limbs(x.params_ptr(), std::move(limbs),
                                 direction == Direction::kForward ? Form::kNtt : Form::kCoefficient);
}

std::vector<std::int64_t> sample_small(std::size_t n, const Distribution& dist, Prng& prng) {
  std::vector<std::int64_t> out(n);
  switch (dist.kind) {
    case Distribution::Kind::kTernary:
      for (auto& c : out) c = static_cast<std::int64_t>(prng.uniform(3)) - 1;
      break;
    case Distribution::Kind::kCenteredBinomial:
      if (dist.k < 0) throw Error(ErrorCode::kInvalidParams, "binomial parameter must be >= 0");
      for (auto& c : out) {
        std::int64_t v = 0;
        for (int i = 0; i < dist.k; ++i) {
          const std::uint8_t byte = prng.next_byte();
          v += (byte & 1) - ((byte >> 1) & 1);
        }
        c = v;
      }
      break;
    case Distribution::Kind::kUniform:
      throw Error(ErrorCode::kInvalidParams, "uniform distribution has no small representation");
  }
  return out;
}

RingElement sample_poly(const RingParamsPtr& params, const Distribution& dist, Prng& prng) {
  if (dist.kind != Distribution::Kind::kUniform) {
    auto coeffs = sample_small(params->degree(), dist, prng);
    return RingElement::from_signed(params, coeffs);
  }
  std::vector<std::vector<u64>> limbs(params->num_limbs());
  for (std::size_t i = 0; i < limbs.size(); ++i) {
    limbs[i].resize(params->degree());
    for (auto& v : limbs[i]) v = prng.uniform(params->modulus(i).value());
  }
  return RingElement::from_limbs(params, std::move(limbs), Form::kCoefficient);
}

RingElement sample_poly(const RingParamsPtr& params, const Distribution& dist, const Seed& seed) {
  Prng prng(seed);
  return sample_poly(params, dist, prng);
}

namespace wire {

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_bytes(std::vector<std::uint8_t>& out, std::string_view bytes) {
  out.insert(out.end(), bytes.begin(), bytes.end());
}

namespace {
void need(std::span<const std::uint8_t> in, std::size_t pos, std::size_t n) {
  if (pos + n > in.size()) throw Error(ErrorCode::kMalformed, "truncated input");
}
}  // namespace

std::uint8_t get_u8(std::span<const std::uint8_t> in, std::size_t& pos) {
  need(in, pos, 1);
  return in[pos++];
}
std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t& pos) {
  need(in, pos, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[pos + i]) << (8 * i);
  pos += 4;
  return v;
}
std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t& pos) {
  need(in, pos, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[pos + i]) << (8 * i);
  pos += 8;
  return v;
}
void expect_bytes(std::span<const std::uint8_t> in, std::size_t& pos, std::string_view bytes) {
  need(in, pos, bytes.size());
  if (!std::equal(bytes.begin(), bytes.end(), in.begin() + static_cast<std::ptrdiff_t>(pos))) {
    throw Error(ErrorCode::kMalformed, "bad magic, expected " + std::string(bytes));
  }
  pos += bytes.size();
}

}  // namespace wire

void write_ring_element(std::vector<std::uint8_t>& out, const RingElement& x) {
  wire::put_bytes(out, "VFHE");
  wire::put_u8(out, kFormatVersion);
  wire::put_u32(out, static_cast<std::uint32_t>(x.degree()));
  wire::put_u32(out, static_cast<std::uint32_t>(x.num_limbs()));
  for (const auto& m : x.params().moduli()) wire::put_u64(out, m.value());
  wire::put_u8(out, static_cast<std::uint8_t>(x.form()));
  for (const auto& limb : x.limbs()) {
    for (u64 v : limb) wire::put_u64(out, v);
  }
}

RingElement read_ring_element(std::span<const std::uint8_t> in, std::size_t& pos,
                              const RingParamsPtr& params) {
  wire::expect_bytes(in, pos, "VFHE");
  if (wire::get_u8(in, pos) != kFormatVersion) throw Error(ErrorCode::kMalformed, "unknown version");
  const std::uint32_t n = wire::get_u32(in, pos);
  const std::uint32_t l = wire::get_u32(in, pos);
  if (l == 0 || l > 64 || n > (1u << 20)) throw Error(ErrorCode::kMalformed, "implausible header");
  std::vector<u64> moduli(l);
  for (auto& m : moduli) m = wire::get_u64(in, pos);
  const std::uint8_t form = wire::get_u8(in, pos);
  if (form > 1) throw Error(ErrorCode::kMalformed, "bad form flag");
  RingParamsPtr p = params;
  if (!p || p->degree() != n || p->modulus_values() != moduli) {
    try {
      p = RingParams::create(n, moduli);
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformed, e.what());
    }
  }
  std::vector<std::vector<u64>> limbs(l, std::vector<u64>(n));
  for (auto& limb : limbs) {
    for (auto& v : limb) v = wire::get_u64(in, pos);
  }
  try {
    return RingElement::from_limbs(p, std::move(limbs), static_cast<Form>(form));
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformed, e.what());
  }
}

}  // namespace vfhe
