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

#include "vfhe/circuit.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "vfhe/error.hpp"

namespace vfhe::compiler {

std::string op_kind_name(OpKind k) {
  switch (k) {
    case OpKind::kInputCt: return "input_ct";
    case OpKind::kInputPt: return "input_pt";
    case OpKind::kCtAdd: return "ct_add";
    case OpKind::kCtSub: return "ct_sub";
    case OpKind::kCtPtAdd: return "ct_pt_add";
    case OpKind::kCtPtSub: return "ct_pt_sub";
    case OpKind::kCtPtMul: return "ct_pt_mul";
    case OpKind::kTensor: return "tensor";
    case OpKind::kRelin: return "relin";
    case OpKind::kModSwitch: return "mod_switch";
    case OpKind::kNoiseFlood: return "noise_flood";
    case OpKind::kRangeCheck: return "range_check";
    case OpKind::kCommitCheck: return "commitment_check";
    case OpKind::kOutput: return "output";
  }
  return "unknown";
}

FheCircuit& FheCircuit::push(OpKind kind, std::string out, std::vector<std::string> args,
                             std::uint64_t param) {
  ops_.push_back({kind, std::move(out), std::move(args), param});
  return *this;
}

FheCircuit& FheCircuit::input_ct(const std::string& n) { return push(OpKind::kInputCt, n, {}); }
FheCircuit& FheCircuit::input_pt(const std::string& n) { return push(OpKind::kInputPt, n, {}); }
FheCircuit& FheCircuit::add(const std::string& o, const std::string& a, const std::string& b) {
  return push(OpKind::kCtAdd, o, {a, b});
}
FheCircuit& FheCircuit::sub(const std::string& o, const std::string& a, const std::string& b) {
  return push(OpKind::kCtSub, o, {a, b});
}
FheCircuit& FheCircuit::add_pt(const std::string& o, const std::string& c, const std::string& m) {
  return push(OpKind::kCtPtAdd, o, {c, m});
}
FheCircuit& FheCircuit::sub_pt(const std::string& o, const std::string& c, const std::string& m) {
  return push(OpKind::kCtPtSub, o, {c, m});
}
FheCircuit& FheCircuit::mul_pt(const std::string& o, const std::string& c, const std::string& m) {
  return push(OpKind::kCtPtMul, o, {c, m});
}
FheCircuit& FheCircuit::tensor(const std::string& o, const std::string& a, const std::string& b) {
  return push(OpKind::kTensor, o, {a, b});
}
FheCircuit& FheCircuit::relin(const std::string& o, const std::string& a) {
  return push(OpKind::kRelin, o, {a});
}
FheCircuit& FheCircuit::mod_switch(const std::string& o, const std::string& a) {
  return push(OpKind::kModSwitch, o, {a});
}
FheCircuit& FheCircuit::noise_flood(const std::string& o, const std::string& a, std::size_t count) {
  return push(OpKind::kNoiseFlood, o, {a}, count);
}
FheCircuit& FheCircuit::range_check(const std::string& pt, std::uint64_t bound) {
  return push(OpKind::kRangeCheck, "", {pt}, bound);
}
FheCircuit& FheCircuit::commitment_check(const std::string& pt) {
  return push(OpKind::kCommitCheck, pt, {pt});
}
FheCircuit& FheCircuit::output(const std::string& ct) { return push(OpKind::kOutput, ct, {ct}); }

std::map<std::string, CtShape> FheCircuit::shapes(std::size_t top_level) const {
  std::map<std::string, CtShape> cts;
  std::set<std::string> pts;
  auto fail = [](const std::string& what) { return Error(ErrorCode::kDataflow, what); };
  auto ct = [&](const std::string& n) -> CtShape& {
    auto it = cts.find(n);
    if (it == cts.end()) throw fail("ciphertext '" + n + "' used before definition");
    return it->second;
  };
  auto pt = [&](const std::string& n) {
    if (!pts.count(n)) throw fail("plaintext '" + n + "' used before definition");
  };
  auto define = [&](const std::string& n, CtShape s) {
    if (cts.count(n) || pts.count(n)) throw fail("wire '" + n + "' defined twice");
    cts[n] = s;
  };
  std::set<std::string> outputs, commits;
  for (const auto& op : ops_) {
    switch (op.kind) {
      case OpKind::kInputCt: define(op.out, {2, top_level, 0}); break;
      case OpKind::kInputPt:
        if (cts.count(op.out) || pts.count(op.out)) throw fail("wire '" + op.out + "' defined twice");
        pts.insert(op.out);
        break;
      case OpKind::kCtAdd:
      case OpKind::kCtSub: {
        const CtShape a = ct(op.args[0]), b = ct(op.args[1]);
        if (a.level != b.level || a.switches != b.switches) throw fail("operands at different levels");
        define(op.out, {std::max(a.parts, b.parts), a.level, a.switches});
        break;
      }
      case OpKind::kCtPtAdd:
      case OpKind::kCtPtSub: {
        const CtShape a = ct(op.args[0]);
        pt(op.args[1]);
        if (a.switches != 0) throw fail("plaintext addition after modulus switching is unsupported");
        define(op.out, a);
        break;
      }
      case OpKind::kCtPtMul: {
        const CtShape a = ct(op.args[0]);
        pt(op.args[1]);
        define(op.out, a);
        break;
      }
      case OpKind::kTensor: {
        const CtShape a = ct(op.args[0]), b = ct(op.args[1]);
        if (a.parts != 2 || b.parts != 2) throw fail("tensor needs degree-1 operands");
        if (a.level != b.level || a.switches != b.switches) throw fail("operands at different levels");
        define(op.out, {3, a.level, a.switches});
        break;
      }
      case OpKind::kRelin: {
        const CtShape a = ct(op.args[0]);
        if (a.parts != 3) throw fail("relin needs a degree-2 operand");
        define(op.out, {2, a.level, a.switches});
        break;
      }
      case OpKind::kModSwitch: {
        const CtShape a = ct(op.args[0]);
        if (a.level < 2) throw fail("no modulus left to drop");
        define(op.out, {a.parts, a.level - 1, a.switches + 1});
        break;
      }
      case OpKind::kNoiseFlood: define(op.out, ct(op.args[0])); break;
      case OpKind::kRangeCheck:
        pt(op.args[0]);
        if (op.param == 0) throw fail("range bound must be positive");
        break;
      case OpKind::kCommitCheck:
        pt(op.args[0]);
        if (!commits.insert(op.args[0]).second) throw fail("duplicate commitment");
        break;
      case OpKind::kOutput:
        ct(op.args[0]);
        if (!outputs.insert(op.args[0]).second) throw fail("duplicate output");
        break;
    }
  }
  return cts;
}

namespace {

std::vector<std::string> names_of(const std::vector<CircuitOp>& ops, OpKind kind) {
  std::vector<std::string> out;
  for (const auto& op : ops) {
    if (op.kind == kind) out.push_back(op.kind == OpKind::kCommitCheck ? op.args[0] : op.out);
  }
  return out;
}

}  // namespace

std::vector<std::string> FheCircuit::ct_inputs() const { return names_of(ops_, OpKind::kInputCt); }
std::vector<std::string> FheCircuit::pt_inputs() const { return names_of(ops_, OpKind::kInputPt); }
std::vector<std::string> FheCircuit::outputs() const { return names_of(ops_, OpKind::kOutput); }
std::vector<std::string> FheCircuit::commitments() const { return names_of(ops_, OpKind::kCommitCheck); }

const PublicLayout::Entry& PublicLayout::find(const std::string& name, Entry::Kind kind) const {
  for (const auto& e : entries) {
    if (e.name == name && e.kind == kind) return e;
  }
  throw Error(ErrorCode::kDataflow, "no public entry for '" + name + "'");
}

PublicLayout layout_for(const FheCircuit& circuit, const bgv::BgvContext& ctx) {
  const auto shapes = circuit.shapes(ctx.top_level());
  PublicLayout layout;
  layout.degree = ctx.degree();
  using Kind = PublicLayout::Entry::Kind;
  auto add = [&](const std::string& n, Kind kind, std::size_t parts, std::size_t level) {
    const std::uint64_t size = kind == Kind::kDigest ? 1 : parts * level * ctx.degree();
    layout.entries.push_back({n, kind, parts, level, layout.total});
    layout.total += static_cast<std::uint32_t>(size);
  };
  for (const auto& n : circuit.ct_inputs()) add(n, Kind::kInput, 2, ctx.top_level());
  for (const auto& n : circuit.outputs()) add(n, Kind::kOutput, shapes.at(n).parts, shapes.at(n).level);
  for (const auto& n : circuit.commitments()) add(n, Kind::kDigest, 0, 0);
  return layout;
}

Matrix ntt_matrix(const RingParams& ring, std::size_t limb, Direction dir) {
  const std::size_t n = ring.degree();
  Matrix m(n, std::vector<u64>(n));
  std::vector<u64> col(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::fill(col.begin(), col.end(), 0);
    col[k] = 1;
    if (dir == Direction::kForward) {
      ntt_forward_inplace(col, ring.modulus(limb), ring.ntt_tables(limb));
    } else {
      ntt_inverse_inplace(col, ring.modulus(limb), ring.ntt_tables(limb));
    }
    for (std::size_t j = 0; j < n; ++j) m[j][k] = col[j];
  }
  return m;
}

BigInt plaintext_digest(const r1cs::FieldParams& field, const bgv::Plaintext& m) {
  std::vector<BigInt> in(m.coeffs.begin(), m.coeffs.end());
  return sponge_native(field, in);
}

namespace {

using Slots = std::vector<Wire>;

struct CtWires {
  std::vector<std::vector<Slots>> parts;  // [part][limb][slot]
  std::size_t level = 0;
};

struct PtWires {
  Slots coeffs;
  std::map<std::size_t, Slots> slots;  // per limb, NTT form
};

class Lowering {
 public:
  Lowering(const FheCircuit& circuit, const CompileParams& params, const PublicLayout& layout,
           const CircuitAssignment* assignment, BuildOptions options)
      : circuit_(circuit),
        params_(params),
        layout_(layout),
        asg_(assignment),
        ctx_(*params.ctx),
        ring_(*params.ctx->top_ring()),
        n_(params.ctx->degree()),
        t_(params.ctx->t()),
        b_(params.field, layout.total, options) {
    need_matrix_ = options.build_lcs || options.track_values;
    if (need_matrix_) {
      for (std::size_t i = 0; i < ring_.num_limbs(); ++i) {
        fwd_.push_back(ntt_matrix(ring_, i, Direction::kForward));
        inv_.push_back(ntt_matrix(ring_, i, Direction::kInverse));
      }
    }
  }

  void run() {
    for (const auto& op : circuit_.ops()) lower(op);
  }

  Builder& builder() { return b_; }
  std::map<std::string, std::vector<RingElement>>& outputs() { return outputs_; }
  std::map<std::string, BigInt>& digests() { return digests_; }

 private:
  bool values() const { return b_.values(); }
  u64 q(std::size_t limb) const { return ring_.modulus(limb).value(); }
  const Matrix* fwd(std::size_t limb) const { return need_matrix_ ? &fwd_[limb] : nullptr; }
  const Matrix* inv(std::size_t limb) const { return need_matrix_ ? &inv_[limb] : nullptr; }

  static Error mismatch(const std::string& what) { return Error(ErrorCode::kTraceMismatch, what); }

  void lower(const CircuitOp& op) {
    b_.set_label(op_kind_name(op.kind));
    switch (op.kind) {
      case OpKind::kInputCt: input_ct(op); break;
      case OpKind::kInputPt: input_pt(op); break;
      case OpKind::kCtAdd:
      case OpKind::kCtSub: ct_add(op, op.kind == OpKind::kCtSub); break;
      case OpKind::kCtPtAdd:
      case OpKind::kCtPtSub: ct_pt_add(op, op.kind == OpKind::kCtPtSub); break;
      case OpKind::kCtPtMul: ct_pt_mul(op); break;
      case OpKind::kTensor: tensor(op); break;
      case OpKind::kRelin: relin(op); break;
      case OpKind::kModSwitch: mod_switch(op); break;
      case OpKind::kNoiseFlood: noise_flood(op); break;
      case OpKind::kRangeCheck: {
        b_.set_label("predicate_range");
        for (const auto& c : pts_.at(op.args[0]).coeffs) b_.bounded(c, op.param);
        break;
      }
      case OpKind::kCommitCheck: commit(op); break;
      case OpKind::kOutput: output(op); break;
    }
  }

  void input_ct(const CircuitOp& op) {
    const auto& e = layout_.find(op.out, PublicLayout::Entry::Kind::kInput);
    const bgv::Ciphertext* c = nullptr;
    if (values()) {
      auto it = asg_->ct_inputs.find(op.out);
      if (it == asg_->ct_inputs.end()) throw mismatch("missing input ciphertext " + op.out);
      c = &it->second;
      if (c->parts.size() != 2 || c->level != e.level) throw mismatch("input ciphertext shape");
      for (const auto& p : c->parts) {
        if (p.form() != Form::kNtt || p.num_limbs() != e.level || p.degree() != n_) {
          throw mismatch("input ciphertext must be NTT form at the top level");
        }
      }
    }
    CtWires w;
    w.level = e.level;
    w.parts.assign(2, std::vector<Slots>(e.level));
    for (std::size_t p = 0; p < 2; ++p) {
      for (std::size_t i = 0; i < e.level; ++i) {
        for (std::size_t s = 0; s < n_; ++s) {
          const auto idx = static_cast<std::uint32_t>(e.offset + (p * e.level + i) * n_ + s);
          w.parts[p][i].push_back(b_.public_var(idx, q(i), c ? BigInt(c->parts[p].limb(i)[s]) : BigInt(0)));
        }
      }
    }
    cts_[op.out] = std::move(w);
  }

  void input_pt(const CircuitOp& op) {
    const bgv::Plaintext* m = nullptr;
    if (values()) {
      auto it = asg_->pt_inputs.find(op.out);
      if (it == asg_->pt_inputs.end()) throw mismatch("missing plaintext input " + op.out);
      m = &it->second;
      if (m->coeffs.size() != n_) throw mismatch("plaintext length");
    }
    b_.set_label("pt_range");
    PtWires w;
    for (std::size_t k = 0; k < n_; ++k) {
      w.coeffs.push_back(b_.witness(t_, m ? BigInt(m->coeffs[k]) : BigInt(0)));
      b_.bounded(w.coeffs.back(), t_);
    }
    pts_[op.out] = std::move(w);
  }

  Slots& pt_slots(const std::string& name, std::size_t limb) {
    PtWires& w = pts_.at(name);
    auto it = w.slots.find(limb);
    if (it != w.slots.end()) return it->second;
    Slots coeffs = w.coeffs;
    return w.slots[limb] = b_.transform(coeffs, fwd(limb), q(limb));
  }

  void ct_add(const CircuitOp& op, bool subtract) {
    CtWires& a = cts_.at(op.args[0]);
    CtWires& bb = cts_.at(op.args[1]);
    CtWires out;
    out.level = a.level;
    const std::size_t parts = std::max(a.parts.size(), bb.parts.size());
    out.parts.assign(parts, std::vector<Slots>(a.level));
    for (std::size_t p = 0; p < parts; ++p) {
      for (std::size_t i = 0; i < a.level; ++i) {
        for (std::size_t s = 0; s < n_; ++s) {
          const bool ha = p < a.parts.size(), hb = p < bb.parts.size();
          Wire w;
          if (ha && hb) {
            w = subtract ? b_.sub(a.parts[p][i][s], bb.parts[p][i][s], q(i))
                         : b_.add(a.parts[p][i][s], bb.parts[p][i][s], q(i));
          } else if (ha) {
            w = a.parts[p][i][s];
          } else if (!subtract) {
            w = bb.parts[p][i][s];
          } else {
            Wire zero = b_.constant(0);
            w = b_.sub(zero, bb.parts[p][i][s], q(i));
          }
          out.parts[p][i].push_back(std::move(w));
        }
      }
    }
    cts_[op.out] = std::move(out);
  }

  void ct_pt_add(const CircuitOp& op, bool subtract) {
    CtWires out = cts_.at(op.args[0]);
    for (std::size_t i = 0; i < out.level; ++i) {
      Slots& m = pt_slots(op.args[1], i);
      b_.set_label(op_kind_name(op.kind));
      for (std::size_t s = 0; s < n_; ++s) {
        Wire& c0 = out.parts[0][i][s];
        c0 = subtract ? b_.sub(c0, m[s], q(i)) : b_.add(c0, m[s], q(i));
      }
    }
    cts_[op.out] = std::move(out);
  }

  void ct_pt_mul(const CircuitOp& op) {
    CtWires out = cts_.at(op.args[0]);
    for (std::size_t i = 0; i < out.level; ++i) {
      Slots& m = pt_slots(op.args[1], i);
      b_.set_label(op_kind_name(op.kind));
      for (auto& part : out.parts) {
        for (std::size_t s = 0; s < n_; ++s) part[i][s] = b_.mul(part[i][s], m[s], q(i));
      }
    }
    cts_[op.out] = std::move(out);
  }

  void tensor(const CircuitOp& op) {
    CtWires& a = cts_.at(op.args[0]);
    CtWires& c = cts_.at(op.args[1]);
    CtWires out;
    out.level = a.level;
    out.parts.assign(3, std::vector<Slots>(a.level));
    for (std::size_t i = 0; i < a.level; ++i) {
      for (std::size_t s = 0; s < n_; ++s) {
        Wire p00 = b_.mul(a.parts[0][i][s], c.parts[0][i][s], q(i));
        Wire p01 = b_.mul(a.parts[0][i][s], c.parts[1][i][s], q(i));
        Wire p10 = b_.mul(a.parts[1][i][s], c.parts[0][i][s], q(i));
        Wire p11 = b_.mul(a.parts[1][i][s], c.parts[1][i][s], q(i));
        out.parts[0][i].push_back(std::move(p00));
        out.parts[1][i].push_back(b_.add(p01, p10, q(i)));
        out.parts[2][i].push_back(std::move(p11));
      }
    }
    cts_[op.out] = std::move(out);
  }

  void relin(const CircuitOp& op) {
    CtWires out = cts_.at(op.args[0]);
    const std::size_t level = out.level;
    const int w = params_.rk ? params_.rk->base_bits : ctx_.params().relin_base_bits;
    if (need_matrix_ && params_.rk == nullptr) throw Error(ErrorCode::kMissingKey, "relin key required");
    // digits[j][k] = coefficient wires of digit k of limb j.
    std::vector<std::vector<Slots>> digits(level);
    for (std::size_t j = 0; j < level; ++j) {
      Slots coeffs = b_.transform(out.parts[2][j], inv(j), q(j));
      const std::size_t qbits = bit_length(BigInt(q(j) - 1));
      const std::size_t count = (qbits + w - 1) / w;
      digits[j].assign(count, Slots());
      for (auto& c : coeffs) {
        if (c.bound > q(j)) b_.reduce(c, q(j));
        b_.set_label("relin");
        if (count == 1) {
          digits[j][0].push_back(c);
          continue;
        }
        std::vector<Wire> ds;
        std::vector<std::pair<const Wire*, BigInt>> terms;
        for (std::size_t k = 0; k < count; ++k) {
          const std::size_t bits = std::min<std::size_t>(w, qbits - w * k);
          const BigInt v = values() ? BigInt((c.value >> (w * k)) & ((BigInt(1) << bits) - 1)) : BigInt(0);
          ds.push_back(b_.witness(BigInt(1) << bits, v));
          b_.range(ds.back(), bits);
        }
        for (std::size_t k = 0; k < count; ++k) terms.push_back({&ds[k], BigInt(1) << (w * k)});
        b_.tie(b_.combine(terms, 0, c.bound), c);
        for (std::size_t k = 0; k < count; ++k) digits[j][k].push_back(std::move(ds[k]));
      }
    }
    b_.set_label("relin");
    for (std::size_t i = 0; i < level; ++i) {
      std::vector<Slots> dslots;
      std::vector<std::pair<const bgv::RelinKey::Pair*, std::size_t>> keys;
      for (std::size_t j = 0; j < level; ++j) {
        for (std::size_t k = 0; k < digits[j].size(); ++k) {
          Slots copy = digits[j][k];
          dslots.push_back(b_.transform(copy, fwd(i), q(i)));
          const bgv::RelinKey::Pair* pair = nullptr;
          if (params_.rk) {
            for (const auto& pr : params_.rk->pairs) {
              if (pr.limb == j && pr.digit == k) pair = &pr;
            }
            if (pair == nullptr) throw Error(ErrorCode::kMissingKey, "relin key lacks a digit");
          }
          keys.push_back({pair, k});
        }
      }
      for (std::size_t part = 0; part < 2; ++part) {
        for (std::size_t s = 0; s < n_; ++s) {
          std::vector<LinTerm> terms{{&out.parts[part][i][s], 1, 1}};
          for (std::size_t d = 0; d < dslots.size(); ++d) {
            BigInt coeff = 0;
            if (keys[d].first) {
              const RingElement& k = part == 0 ? keys[d].first->k0 : keys[d].first->k1;
              coeff = k.limb(i)[s];
            }
            terms.push_back({&dslots[d][s], coeff, q(i) - 1});
          }
          out.parts[part][i][s] = b_.linear(terms, 0, q(i));
        }
      }
    }
    out.parts.resize(2);
    cts_[op.out] = std::move(out);
  }

  // Reduces `a` until an (a + extra) congruence modulo qm fits the field.
  void make_room(Wire& a, const BigInt& extra, u64 qa, u64 qm) {
    for (;;) {
      const BigInt bound = a.bound + extra;
      const std::size_t kb = bit_length((bound - 1) / qm);
      if (bound < b_.p() && (BigInt(1) << kb) * qm + qm < b_.p()) return;
      if (a.bound <= qa) throw Error(ErrorCode::kFieldOverflow, "modulus switch does not fit the field");
      b_.reduce(a, qa);
    }
  }

  void mod_switch(const CircuitOp& op) {
    CtWires in = cts_.at(op.args[0]);
    const std::size_t level = in.level;
    const std::size_t last = level - 1;
    const Modulus& ql = ring_.modulus(last);
    const u64 qL = ql.value();
    const u64 h = (qL - 1) / 2;
    const u64 t_inv = ql.inv(t_ % qL);
    const BigInt t = t_;
    CtWires out;
    out.level = level - 1;
    out.parts.assign(in.parts.size(), std::vector<Slots>(level - 1));
    for (std::size_t p = 0; p < in.parts.size(); ++p) {
      std::vector<Slots> a(level);
      for (std::size_t i = 0; i < level; ++i) a[i] = b_.transform(in.parts[p][i], inv(i), q(i));
      b_.set_label("mod_switch");
      std::vector<Slots> next(level - 1);
      for (std::size_t n = 0; n < n_; ++n) {
        const std::int64_t delta =
            values() ? ql.centered(ql.mul(static_cast<u64>(mod_floor(a[last][n].value, BigInt(qL))), t_inv))
                     : 0;
        Wire dw = b_.witness(qL, values() ? BigInt(delta + static_cast<std::int64_t>(h)) : BigInt(0));
        b_.bounded(dw, qL);
        const BigInt base = t * h + t * qL;
        make_room(a[last][n], base, qL, qL);
        {
          const std::pair<const Wire*, BigInt> terms[] = {{&a[last][n], 1}, {&dw, -t}};
          b_.congruence(b_.combine(terms, base, a[last][n].bound + base), qL);
        }
        for (std::size_t i = 0; i + 1 < level; ++i) {
          const Modulus& qi = ring_.modulus(i);
          BigInt cv = 0;
          if (values()) {
            const u64 ai = static_cast<u64>(mod_floor(a[i][n].value, BigInt(qi.value())));
            const u64 d = qi.mul(t_ % qi.value(), qi.from_signed(delta));
            cv = qi.mul(qi.sub(ai, d), qi.inv(qL % qi.value()));
          }
          Wire cw = b_.witness(qi.value(), cv);
          b_.bounded(cw, qi.value());
          const BigInt span = t * (qL - 1) + BigInt(qL) * (qi.value() - 1);
          const BigInt offset = ((span + qi.value() - 1) / qi.value()) * qi.value();
          const BigInt extra = t * h + offset;
          make_room(a[i][n], extra, qi.value(), qi.value());
          const std::pair<const Wire*, BigInt> terms[] = {{&a[i][n], 1}, {&dw, -t}, {&cw, -BigInt(qL)}};
          b_.congruence(b_.combine(terms, extra, a[i][n].bound + extra), qi.value());
          next[i].push_back(std::move(cw));
        }
      }
      for (std::size_t i = 0; i + 1 < level; ++i) {
        out.parts[p][i] = b_.transform(next[i], fwd(i), q(i));
      }
    }
    cts_[op.out] = std::move(out);
  }

  void noise_flood(const CircuitOp& op) {
    CtWires out = cts_.at(op.args[0]);
    const std::vector<bgv::ZeroEncRandomness>* rand = nullptr;
    if (values()) {
      auto it = asg_->flood.find(op.out);
      if (it == asg_->flood.end() || it->second.size() != op.param) {
        throw mismatch("flood randomness missing for " + op.out);
      }
      rand = &it->second;
    }
    if (need_matrix_ && params_.pk == nullptr) throw Error(ErrorCode::kMissingKey, "public key required");
    const std::int64_t bf = ctx_.flood_bound();
    for (std::size_t f = 0; f < op.param; ++f) {
      b_.set_label("zero_enc_check");
      auto shifted = [&](const std::vector<std::int64_t>* src, std::int64_t shift, const BigInt& bound) {
        if (src && src->size() != n_) throw mismatch("flood randomness length");
        Slots ws;
        for (std::size_t k = 0; k < n_; ++k) {
          ws.push_back(b_.witness(bound, src ? BigInt((*src)[k] + shift) : BigInt(0)));
          b_.bounded(ws.back(), bound);
        }
        return ws;
      };
      Slots u = shifted(rand ? &(*rand)[f].u : nullptr, 1, 3);
      Slots e0 = shifted(rand ? &(*rand)[f].e0 : nullptr, bf, 2 * bf + 1);
      Slots e1 = shifted(rand ? &(*rand)[f].e1 : nullptr, bf, 2 * bf + 1);
      for (std::size_t i = 0; i < out.level; ++i) {
        Slots uc = u, e0c = e0, e1c = e1;
        Slots us = b_.transform(uc, fwd(i), q(i), 1);
        Slots e0s = b_.transform(e0c, fwd(i), q(i), static_cast<u64>(bf));
        Slots e1s = b_.transform(e1c, fwd(i), q(i), static_cast<u64>(bf));
        const BigInt tq = t_ % q(i);
        for (std::size_t s = 0; s < n_; ++s) {
          for (std::size_t part = 0; part < 2; ++part) {
            const BigInt key = params_.pk ? BigInt((part == 0 ? params_.pk->p0 : params_.pk->p1).limb(i)[s])
                                          : BigInt(0);
            Slots& es = part == 0 ? e0s : e1s;
            const LinTerm terms[] = {{&out.parts[part][i][s], 1, 1},
                                     {&us[s], key, q(i) - 1},
                                     {&es[s], tq, tq}};
            out.parts[part][i][s] = b_.linear(terms, 0, q(i));
          }
        }
      }
    }
    cts_[op.out] = std::move(out);
  }

  void commit(const CircuitOp& op) {
    const auto& e = layout_.find(op.args[0], PublicLayout::Entry::Kind::kDigest);
    const Slots& coeffs = pts_.at(op.args[0]).coeffs;
    b_.set_label("commitment");
    Wire digest = sponge_gadget(b_, params_.field, coeffs);
    BigInt native = 0;
    if (values()) {
      std::vector<BigInt> in;
      for (const auto& c : coeffs) in.push_back(c.value);
      native = sponge_native(params_.field, in);
      digests_[op.args[0]] = native;
    }
    Wire pub = b_.public_var(e.offset, b_.p(), native);
    b_.tie(digest, pub);
  }

  void output(const CircuitOp& op) {
    const auto& e = layout_.find(op.out, PublicLayout::Entry::Kind::kOutput);
    CtWires& c = cts_.at(op.out);
    b_.set_label("output");
    std::vector<RingElement> parts;
    for (std::size_t p = 0; p < c.parts.size(); ++p) {
      std::vector<std::vector<u64>> limbs(c.level, std::vector<u64>(n_));
      for (std::size_t i = 0; i < c.level; ++i) {
        for (std::size_t s = 0; s < n_; ++s) {
          Wire& w = c.parts[p][i][s];
          const auto idx = static_cast<std::uint32_t>(e.offset + (p * c.level + i) * n_ + s);
          if (w.bound <= q(i)) {
            Wire pub = b_.public_var(idx, q(i), w.value);
            b_.tie(w, pub);
          } else {
            b_.reduce_into(w, q(i), idx);
          }
          if (values()) limbs[i][s] = static_cast<u64>(mod_floor(w.value, BigInt(q(i))));
        }
      }
      if (values()) {
        parts.push_back(RingElement::from_limbs(ctx_.ring(c.level), std::move(limbs), Form::kNtt));
      }
    }
    if (values()) outputs_[op.out] = std::move(parts);
  }

  const FheCircuit& circuit_;
  const CompileParams& params_;
  const PublicLayout& layout_;
  const CircuitAssignment* asg_;
  const bgv::BgvContext& ctx_;
  const RingParams& ring_;
  std::size_t n_;
  u64 t_;
  Builder b_;
  bool need_matrix_ = false;
  std::vector<Matrix> fwd_, inv_;
  std::map<std::string, CtWires> cts_;
  std::map<std::string, PtWires> pts_;
  std::map<std::string, std::vector<RingElement>> outputs_;
  std::map<std::string, BigInt> digests_;
};

void check_params(const CompileParams& params) {
  if (!params.ctx) throw Error(ErrorCode::kInvalidParams, "compile needs a scheme context");
  const auto& ring = *params.ctx->top_ring();
  for (std::size_t i = 0; i < ring.num_limbs(); ++i) {
    const BigInt q = ring.modulus(i).value();
    if (q * q * ring.degree() >= params.field.p()) {
      throw Error(ErrorCode::kFieldOverflow, "field too small: need p > N * q_i^2");
    }
  }
}

}  // namespace

CompiledCircuit compile(const FheCircuit& circuit, const CompileParams& params) {
  check_params(params);
  CompiledCircuit out;
  out.layout = layout_for(circuit, *params.ctx);
  BuildOptions opts = params.options;
  opts.track_values = false;
  Lowering low(circuit, params, out.layout, nullptr, opts);
  low.run();
  Builder& b = low.builder();
  out.stats = b.stats();
  out.stats.eager_baseline_count = b.ops();
  out.stats.lazy_ratio = out.stats.reductions_count == 0
                             ? 0.0
                             : static_cast<double>(b.ops()) / static_cast<double>(out.stats.reductions_count);
  out.cs = b.take_system();
  return out;
}

WitnessResult generate_witness(const CompiledCircuit& compiled, const FheCircuit& circuit,
                               const CompileParams& params, const CircuitAssignment& assignment) {
  check_params(params);
  BuildOptions opts = params.options;
  opts.track_values = true;
  opts.build_lcs = false;
  Lowering low(circuit, params, compiled.layout, &assignment, opts);
  low.run();
  Builder& b = low.builder();
  if (b.num_witness() != compiled.cs.num_witness ||
      b.num_constraints() != compiled.stats.constraints_total) {
    throw Error(ErrorCode::kTraceMismatch, "witness run diverged from the compiled system");
  }
  WitnessResult r;
  r.public_inputs = b.public_values();
  r.witness = b.witness_values();
  r.outputs = std::move(low.outputs());
  r.digests = std::move(low.digests());
  return r;
}

std::vector<BigInt> public_inputs(const PublicLayout& layout,
                                  const std::map<std::string, bgv::Ciphertext>& inputs,
                                  const std::map<std::string, std::vector<RingElement>>& outputs,
                                  const std::map<std::string, BigInt>& digests) {
  std::vector<BigInt> pub(layout.total);
  auto fail = [](const std::string& what) { return Error(ErrorCode::kTraceMismatch, what); };
  auto place = [&](const PublicLayout::Entry& e, const std::vector<RingElement>& parts) {
    if (parts.size() != e.parts) throw fail("part count mismatch for " + e.name);
    for (std::size_t p = 0; p < parts.size(); ++p) {
      const RingElement& x = parts[p];
      if (x.form() != Form::kNtt || x.num_limbs() != e.level || x.degree() != layout.degree) {
        throw fail("ciphertext shape mismatch for " + e.name);
      }
      for (std::size_t i = 0; i < e.level; ++i) {
        const u64 q = x.params().modulus(i).value();
        for (std::size_t s = 0; s < layout.degree; ++s) {
          const u64 v = x.limb(i)[s];
          if (v >= q) throw fail("non-canonical residue");
          pub[e.offset + (p * e.level + i) * layout.degree + s] = v;
        }
      }
    }
  };
  for (const auto& e : layout.entries) {
    switch (e.kind) {
      case PublicLayout::Entry::Kind::kInput: {
        auto it = inputs.find(e.name);
        if (it == inputs.end()) throw fail("missing input " + e.name);
        if (it->second.level != e.level) throw fail("input level mismatch");
        place(e, it->second.parts);
        break;
      }
      case PublicLayout::Entry::Kind::kOutput: {
        auto it = outputs.find(e.name);
        if (it == outputs.end()) throw fail("missing output " + e.name);
        place(e, it->second);
        break;
      }
      case PublicLayout::Entry::Kind::kDigest: {
        auto it = digests.find(e.name);
        if (it == digests.end()) throw fail("missing digest " + e.name);
        pub[e.offset] = it->second;
        break;
      }
    }
  }
  return pub;
}

}  // namespace vfhe::compiler
