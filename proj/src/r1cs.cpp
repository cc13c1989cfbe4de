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

#include "vfhe/r1cs.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include <boost/multiprecision/miller_rabin.hpp>
#include "json.hpp"

#include "vfhe/error.hpp"

namespace vfhe::r1cs {

FieldParams FieldParams::create(const BigInt& p) {
  std::mt19937_64 gen(0x5eed);
  if (p < 3 || !boost::multiprecision::miller_rabin_test(p, 40, gen)) {
    throw Error(ErrorCode::kInvalidParams, "field modulus must be an odd prime");
  }
  FieldParams f;
  f.p_ = p;
  f.bits_ = vfhe::bit_length(p);
  return f;
}

FieldParams FieldParams::bn254() {
  static const FieldParams f = create(BigInt(
      "21888242871839275222246405745257275088548364400416034343698204186575808495617"));
  return f;
}

FieldParams FieldParams::test31() {
  static const FieldParams f = create(BigInt(2147483647));
  return f;
}

LinComb LinComb::variable(Var v) {
  LinComb lc;
  lc.terms_.push_back({v, 1});
  return lc;
}

LinComb LinComb::constant(const BigInt& c, const BigInt& p) {
  LinComb lc;
  lc.add_term(kOne, c, p);
  return lc;
}

LinComb LinComb::from_terms(std::vector<Term> terms) {
  LinComb lc;
  lc.terms_ = std::move(terms);
  return lc;
}

void LinComb::add_term(Var v, const BigInt& c, const BigInt& p) {
  BigInt cm = mod_floor(c, p);
  if (cm == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), v,
                             [](const Term& t, Var x) { return t.var < x; });
  if (it != terms_.end() && it->var == v) {
    it->coeff += cm;
    if (it->coeff >= p) it->coeff -= p;
    if (it->coeff == 0) terms_.erase(it);
  } else {
    terms_.insert(it, Term{v, std::move(cm)});
  }
}

void LinComb::add_scaled(const LinComb& other, const BigInt& c, const BigInt& p) {
  const BigInt cm = mod_floor(c, p);
  if (cm == 0 || other.terms_.empty()) return;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto i = terms_.begin();
  auto j = other.terms_.begin();
  while (i != terms_.end() || j != other.terms_.end()) {
    if (j == other.terms_.end() || (i != terms_.end() && i->var < j->var)) {
      merged.push_back(std::move(*i++));
    } else {
      BigInt add = (j->coeff * cm) % p;
      if (i != terms_.end() && i->var == j->var) {
        add += i->coeff;
        if (add >= p) add -= p;
        ++i;
      }
      if (add != 0) merged.push_back(Term{j->var, std::move(add)});
      ++j;
    }
  }
  terms_ = std::move(merged);
}

BigInt LinComb::evaluate(std::span<const BigInt> z, const BigInt& p) const {
  BigInt acc = 0;
  for (const auto& t : terms_) acc += t.coeff * z[t.var];
  return acc % p;
}

namespace {

std::vector<BigInt> assemble(const ConstraintSystem& cs, std::span<const BigInt> pub,
                             std::span<const BigInt> wit) {
  if (pub.size() != cs.num_public || wit.size() != cs.num_witness) {
    throw Error(ErrorCode::kSizeMismatch, "assignment length does not match the system");
  }
  std::vector<BigInt> z;
  z.reserve(cs.num_vars());
  z.push_back(1);
  z.insert(z.end(), pub.begin(), pub.end());
  z.insert(z.end(), wit.begin(), wit.end());
  return z;
}

}  // namespace

std::int64_t first_unsatisfied(const ConstraintSystem& cs, std::span<const BigInt> public_inputs,
                               std::span<const BigInt> witness) {
  const auto z = assemble(cs, public_inputs, witness);
  for (const auto& v : z) {
    if (v < 0 || v >= cs.p) return 0;
  }
  for (std::size_t i = 0; i < cs.constraints.size(); ++i) {
    const auto& con = cs.constraints[i];
    const BigInt a = con.a.evaluate(z, cs.p);
    const BigInt c = con.c.evaluate(z, cs.p);
    if (a == 0) {
      if (c != 0) return static_cast<std::int64_t>(i);
      continue;
    }
    if ((a * con.b.evaluate(z, cs.p)) % cs.p != c) return static_cast<std::int64_t>(i);
  }
  return -1;
}

bool check_satisfaction(const ConstraintSystem& cs, std::span<const BigInt> public_inputs,
                        std::span<const BigInt> witness) {
  return first_unsatisfied(cs, public_inputs, witness) < 0;
}

std::string export_r1cs(const ConstraintSystem& cs) {
  std::size_t nnz[3] = {0, 0, 0};
  for (const auto& c : cs.constraints) {
    nnz[0] += c.a.terms().size();
    nnz[1] += c.b.terms().size();
    nnz[2] += c.c.terms().size();
  }
  std::ostringstream out;
  out << "VR1CS1\n"
      << "p " << to_decimal(cs.p) << "\n"
      << "counts " << cs.num_public << ' ' << cs.num_witness << ' ' << cs.constraints.size() << ' '
      << nnz[0] << ' ' << nnz[1] << ' ' << nnz[2] << "\n";
  const char* names[3] = {"A", "B", "C"};
  for (int s = 0; s < 3; ++s) {
    out << names[s] << "\n";
    for (std::size_t i = 0; i < cs.constraints.size(); ++i) {
      const auto& c = cs.constraints[i];
      const LinComb& lc = s == 0 ? c.a : s == 1 ? c.b : c.c;
      for (const auto& t : lc.terms()) out << i << ' ' << t.var << ' ' << to_decimal(t.coeff) << "\n";
    }
  }
  return out.str();
}

ConstraintSystem import_r1cs(const std::string& text) {
  std::istringstream in(text);
  auto fail = [](const char* what) { return Error(ErrorCode::kMalformed, what); };
  std::string word;
  if (!(in >> word) || word != "VR1CS1") throw fail("missing VR1CS1 magic");
  std::string p_text;
  if (!(in >> word >> p_text) || word != "p") throw fail("missing field modulus");
  ConstraintSystem cs;
  cs.p = parse_decimal(p_text);
  if (cs.p < 2) throw fail("bad field modulus");
  std::size_t count = 0, nnz[3];
  if (!(in >> word >> cs.num_public >> cs.num_witness >> count >> nnz[0] >> nnz[1] >> nnz[2]) ||
      word != "counts") {
    throw fail("bad counts line");
  }
  cs.constraints.resize(count);
  std::vector<std::vector<std::vector<Term>>> rows(3, std::vector<std::vector<Term>>(count));
  const char* names[3] = {"A", "B", "C"};
  for (int s = 0; s < 3; ++s) {
    if (!(in >> word) || word != names[s]) throw fail("missing section header");
    for (std::size_t e = 0; e < nnz[s]; ++e) {
      std::size_t ci = 0;
      Var var = 0;
      std::string coeff;
      if (!(in >> ci >> var >> coeff)) throw fail("truncated section");
      if (ci >= count || var >= cs.num_vars()) throw fail("index out of range");
      BigInt c = parse_decimal(coeff);
      if (c <= 0 || c >= cs.p) throw fail("coefficient out of range");
      auto& row = rows[s][ci];
      if (!row.empty() && row.back().var >= var) throw fail("terms not sorted");
      row.push_back({var, std::move(c)});
    }
  }
  if (in >> word) throw fail("trailing data");
  for (std::size_t i = 0; i < count; ++i) {
    cs.constraints[i].a = LinComb::from_terms(std::move(rows[0][i]));
    cs.constraints[i].b = LinComb::from_terms(std::move(rows[1][i]));
    cs.constraints[i].c = LinComb::from_terms(std::move(rows[2][i]));
  }
  return cs;
}

std::string CostStats::to_json() const {
  nlohmann::ordered_json j;
  j["constraints_total"] = constraints_total;
  j["constraints_by_gadget"] = constraints_by_gadget;
  j["reductions_count"] = reductions_count;
  j["reductions_bits_total"] = reductions_bits_total;
  j["eager_baseline_count"] = eager_baseline_count;
  j["lazy_ratio"] = lazy_ratio;
  return j.dump(2);
}

}  // namespace vfhe::r1cs
