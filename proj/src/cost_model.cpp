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

#include "vfhe/cost_model.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "vfhe/error.hpp"

namespace vfhe::compiler {
namespace {

// Scalar mirror of Builder: every call stands for `m` identical instances.
class Sim {
 public:
  Sim(const BigInt& p, Schedule s) : p_(p), schedule_(s) {}

  bool reducible(const BigInt& bound, u64 q) const {
    return bound < p_ && (BigInt(1) << bit_length((bound - 1) / q)) * q + q < p_;
  }

  void label(std::string l) { label_ = std::move(l); }
  const std::string& label() const { return label_; }

  void count(std::size_t m, const std::string& label) {
    stats_.constraints_total += m;
    stats_.constraints_by_gadget[label] += m;
  }

  void bounded(const BigInt& bound, std::size_t m) { count(m * bounded_cost(bound), label_); }
  void range(std::size_t bits, std::size_t m) { count(m * (bits + 1), label_); }

  void congruence(const BigInt& e_bound, u64 q, std::size_t m, const std::string& label) {
    const std::size_t kb = bit_length((e_bound - 1) / q);
    if (e_bound >= p_ || (BigInt(1) << kb) * q + q >= p_) {
      throw Error(ErrorCode::kFieldOverflow, "congruence does not fit the field");
    }
    count(m * (kb + 2), label);
  }

  void reduce(BigInt& b, u64 q, std::size_t m) {
    count(m * bounded_cost(BigInt(q)), "mod_reduce");
    congruence(b, q, m, "mod_reduce");
    stats_.reductions_count += m;
    stats_.reductions_bits_total += m * bit_length(BigInt(q));
    b = q;
  }

  void reduce_into(BigInt& b, u64 q, std::size_t m) {
    count(m * bounded_cost(BigInt(q)), label_);
    congruence(b, q, m, label_);
    stats_.reductions_count += m;
    stats_.reductions_bits_total += m * bit_length(BigInt(q));
    b = q;
  }

  void reduce_largest(std::initializer_list<BigInt*> ops, u64 q, std::size_t m) {
    reduce_largest(std::vector<BigInt*>(ops), q, m);
  }
  void reduce_largest(const std::vector<BigInt*>& ops, u64 q, std::size_t m) {
    BigInt* pick = nullptr;
    for (BigInt* b : ops) {
      if (*b <= q) continue;
      if (pick == nullptr || *b > *pick) pick = b;
    }
    if (pick == nullptr) throw Error(ErrorCode::kFieldOverflow, "operation overflows the field");
    reduce(*pick, q, m);
  }

  BigInt finish(BigInt out, u64 q, std::size_t m) {
    ops_ += m;
    if (schedule_ == Schedule::kEager) reduce(out, q, m);
    return out;
  }

  BigInt add(BigInt& a, BigInt& b, u64 q, std::size_t m) {
    while (!reducible(a + b - 1, q)) reduce_largest({&a, &b}, q, m);
    return finish(a + b - 1, q, m);
  }

  BigInt sub(BigInt& a, BigInt& b, u64 q, std::size_t m, bool a_const = false) {
    auto offset = [&] { return ((b - 1 + q - 1) / q) * q; };
    while (!reducible(a + offset(), q)) {
      if (a_const) {
        reduce_largest({&b}, q, m);
      } else {
        reduce_largest({&a, &b}, q, m);
      }
    }
    return finish(a + offset(), q, m);
  }

  BigInt mul(BigInt& a, BigInt& b, u64 q, std::size_t m) {
    while (!reducible((a - 1) * (b - 1) + 1, q)) reduce_largest({&a, &b}, q, m);
    count(m, "mul");
    return finish((a - 1) * (b - 1) + 1, q, m);
  }

  BigInt linear(const std::vector<std::pair<BigInt*, BigInt>>& terms, u64 q, std::size_t m) {
    std::vector<BigInt*> ops;
    for (const auto& t : terms) ops.push_back(t.first);
    auto bound = [&] {
      BigInt b = 1;
      for (const auto& t : terms) b += t.second * (*t.first - 1);
      return b;
    };
    while (!reducible(bound(), q)) reduce_largest(ops, q, m);
    return finish(bound(), q, m);
  }

  // n inputs of uniform bound `in`; returns the uniform output bound.
  BigInt transform(const BigInt& in, std::size_t n, u64 q, bool shifted) {
    const BigInt base = shifted ? BigInt(q) : BigInt(1);
    const BigInt qm1 = q - 1;
    std::size_t reduced = 0;
    auto bound = [&] {
      return base + qm1 * ((BigInt(n - reduced) * (in - 1)) + BigInt(reduced) * qm1);
    };
    while (!reducible(bound(), q)) {
      if (in <= q || reduced == n) throw Error(ErrorCode::kFieldOverflow, "transform overflows the field");
      BigInt b = in;
      reduce(b, q, 1);
      ++reduced;
    }
    const BigInt out = bound();
    ops_ += n;
    if (schedule_ == Schedule::kEager) {
      BigInt b = out;
      reduce(b, q, n);
      return b;
    }
    return out;
  }

  const BigInt& p() const { return p_; }
  std::size_t ops() const { return ops_; }
  r1cs::CostStats& stats() { return stats_; }

 private:
  BigInt p_;
  Schedule schedule_;
  std::string label_ = "misc";
  std::size_t ops_ = 0;
  r1cs::CostStats stats_;
};

using Bounds = std::vector<std::vector<BigInt>>;  // [part][limb]

struct PtState {
  std::map<std::size_t, BigInt> slots;
};

class Model {
 public:
  Model(const FheCircuit& circuit, const CompileParams& params)
      : circuit_(circuit),
        ctx_(*params.ctx),
        ring_(*params.ctx->top_ring()),
        n_(params.ctx->degree()),
        t_(params.ctx->t()),
        field_(params.field),
        rk_bits_(params.rk ? params.rk->base_bits : params.ctx->params().relin_base_bits),
        sim_(params.field.p(), params.options.schedule) {}

  r1cs::CostStats run() {
    circuit_.shapes(ctx_.top_level());
    for (const auto& op : circuit_.ops()) lower(op);
    r1cs::CostStats s = sim_.stats();
    s.eager_baseline_count = sim_.ops();
    s.lazy_ratio = s.reductions_count == 0
                       ? 0.0
                       : static_cast<double>(sim_.ops()) / static_cast<double>(s.reductions_count);
    return s;
  }

 private:
  u64 q(std::size_t i) const { return ring_.modulus(i).value(); }

  BigInt& pt_slot(const std::string& name, std::size_t limb) {
    auto& st = pts_.at(name);
    auto it = st.slots.find(limb);
    if (it != st.slots.end()) return it->second;
    return st.slots[limb] = sim_.transform(t_, n_, q(limb), false);
  }

  void make_room(BigInt& a, const BigInt& extra, u64 qa, u64 qm) {
    for (;;) {
      const BigInt bound = a + extra;
      const std::size_t kb = bit_length((bound - 1) / qm);
      if (bound < sim_.p() && (BigInt(1) << kb) * qm + qm < sim_.p()) return;
      if (a <= qa) throw Error(ErrorCode::kFieldOverflow, "modulus switch does not fit the field");
      sim_.reduce(a, qa, n_);
    }
  }

  void lower(const CircuitOp& op) {
    sim_.label(op_kind_name(op.kind));
    const std::size_t n = n_;
    switch (op.kind) {
      case OpKind::kInputCt: {
        Bounds b(2);
        for (auto& part : b) {
          for (std::size_t i = 0; i < ctx_.top_level(); ++i) part.push_back(q(i));
        }
        cts_[op.out] = b;
        break;
      }
      case OpKind::kInputPt:
        sim_.label("pt_range");
        sim_.bounded(t_, n);
        pts_[op.out] = PtState{};
        break;
      case OpKind::kCtAdd:
      case OpKind::kCtSub: {
        const bool subtract = op.kind == OpKind::kCtSub;
        Bounds& a = cts_.at(op.args[0]);
        Bounds& b = cts_.at(op.args[1]);
        const std::size_t level = a[0].size();
        Bounds out(std::max(a.size(), b.size()), std::vector<BigInt>(level));
        for (std::size_t p = 0; p < out.size(); ++p) {
          for (std::size_t i = 0; i < level; ++i) {
            const bool ha = p < a.size(), hb = p < b.size();
            if (ha && hb) {
              out[p][i] = subtract ? sim_.sub(a[p][i], b[p][i], q(i), n) : sim_.add(a[p][i], b[p][i], q(i), n);
            } else if (ha) {
              out[p][i] = a[p][i];
            } else if (!subtract) {
              out[p][i] = b[p][i];
            } else {
              BigInt zero = 1;
              out[p][i] = sim_.sub(zero, b[p][i], q(i), n, true);
            }
          }
        }
        cts_[op.out] = std::move(out);
        break;
      }
      case OpKind::kCtPtAdd:
      case OpKind::kCtPtSub: {
        Bounds out = cts_.at(op.args[0]);
        for (std::size_t i = 0; i < out[0].size(); ++i) {
          BigInt& m = pt_slot(op.args[1], i);
          out[0][i] = op.kind == OpKind::kCtPtSub ? sim_.sub(out[0][i], m, q(i), n)
                                                  : sim_.add(out[0][i], m, q(i), n);
        }
        cts_[op.out] = std::move(out);
        break;
      }
      case OpKind::kCtPtMul: {
        Bounds out = cts_.at(op.args[0]);
        for (std::size_t i = 0; i < out[0].size(); ++i) {
          BigInt& m = pt_slot(op.args[1], i);
          for (auto& part : out) part[i] = sim_.mul(part[i], m, q(i), n);
        }
        cts_[op.out] = std::move(out);
        break;
      }
      case OpKind::kTensor: {
        Bounds& a = cts_.at(op.args[0]);
        Bounds& c = cts_.at(op.args[1]);
        const std::size_t level = a[0].size();
        Bounds out(3, std::vector<BigInt>(level));
        for (std::size_t i = 0; i < level; ++i) {
          BigInt p00 = sim_.mul(a[0][i], c[0][i], q(i), n);
          BigInt p01 = sim_.mul(a[0][i], c[1][i], q(i), n);
          BigInt p10 = sim_.mul(a[1][i], c[0][i], q(i), n);
          BigInt p11 = sim_.mul(a[1][i], c[1][i], q(i), n);
          out[0][i] = p00;
          out[1][i] = sim_.add(p01, p10, q(i), n);
          out[2][i] = p11;
        }
        cts_[op.out] = std::move(out);
        break;
      }
      case OpKind::kRelin: relin(op); break;
      case OpKind::kModSwitch: mod_switch(op); break;
      case OpKind::kNoiseFlood: noise_flood(op); break;
      case OpKind::kRangeCheck:
        sim_.label("predicate_range");
        sim_.bounded(op.param, n);
        break;
      case OpKind::kCommitCheck: {
        sim_.label("commitment");
        const auto sp = SpongeParams::for_field(field_);
        const std::size_t per_round =
            static_cast<std::size_t>(std::bit_width(sp.exponent) - 1 + std::popcount(sp.exponent) - 1);
        sim_.count(n * sp.round_constants.size() * per_round + 1, "commitment");
        break;
      }
      case OpKind::kOutput: {
        sim_.label("output");
        Bounds& c = cts_.at(op.out);
        for (auto& part : c) {
          for (std::size_t i = 0; i < part.size(); ++i) {
            if (part[i] <= q(i)) {
              sim_.count(n, "output");
            } else {
              sim_.reduce_into(part[i], q(i), n);
            }
          }
        }
        break;
      }
    }
  }

  void relin(const CircuitOp& op) {
    Bounds out = cts_.at(op.args[0]);
    const std::size_t level = out[0].size();
    const std::size_t n = n_;
    // Digit bounds per source limb.
    std::vector<std::vector<BigInt>> digits(level);
    for (std::size_t j = 0; j < level; ++j) {
      BigInt c = sim_.transform(out[2][j], n, q(j), false);
      if (c > q(j)) sim_.reduce(c, q(j), n);
      sim_.label("relin");
      const std::size_t qbits = bit_length(BigInt(q(j) - 1));
      const std::size_t count = (qbits + rk_bits_ - 1) / rk_bits_;
      if (count == 1) {
        digits[j].push_back(c);
        continue;
      }
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t bits = std::min<std::size_t>(rk_bits_, qbits - rk_bits_ * k);
        sim_.range(bits, n);
        digits[j].push_back(BigInt(1) << bits);
      }
      sim_.count(n, "relin");
    }
    sim_.label("relin");
    for (std::size_t i = 0; i < level; ++i) {
      std::vector<BigInt> ds;
      for (std::size_t j = 0; j < level; ++j) {
        for (const auto& d : digits[j]) ds.push_back(sim_.transform(d, n, q(i), false));
      }
      for (std::size_t part = 0; part < 2; ++part) {
        std::vector<std::pair<BigInt*, BigInt>> terms{{&out[part][i], 1}};
        for (auto& d : ds) terms.push_back({&d, q(i) - 1});
        out[part][i] = sim_.linear(terms, q(i), n);
      }
    }
    out.resize(2);
    cts_[op.out] = std::move(out);
  }

  void mod_switch(const CircuitOp& op) {
    const Bounds in = cts_.at(op.args[0]);
    const std::size_t level = in[0].size();
    const std::size_t last = level - 1;
    const u64 qL = q(last);
    const BigInt t = t_;
    const BigInt h = (qL - 1) / 2;
    const std::size_t n = n_;
    Bounds out(in.size(), std::vector<BigInt>(level - 1));
    for (std::size_t p = 0; p < in.size(); ++p) {
      std::vector<BigInt> a(level);
      for (std::size_t i = 0; i < level; ++i) a[i] = sim_.transform(in[p][i], n, q(i), false);
      sim_.label("mod_switch");
      sim_.bounded(qL, n);
      const BigInt base = t * h + t * qL;
      make_room(a[last], base, qL, qL);
      sim_.congruence(a[last] + base, qL, n, "mod_switch");
      for (std::size_t i = 0; i + 1 < level; ++i) {
        sim_.bounded(q(i), n);
        const BigInt span = t * (qL - 1) + BigInt(qL) * (q(i) - 1);
        const BigInt extra = t * h + ((span + q(i) - 1) / q(i)) * q(i);
        make_room(a[i], extra, q(i), q(i));
        sim_.congruence(a[i] + extra, q(i), n, "mod_switch");
      }
      for (std::size_t i = 0; i + 1 < level; ++i) out[p][i] = sim_.transform(q(i), n, q(i), false);
    }
    cts_[op.out] = std::move(out);
  }

  void noise_flood(const CircuitOp& op) {
    Bounds out = cts_.at(op.args[0]);
    const std::size_t level = out[0].size();
    const std::size_t n = n_;
    const BigInt bf = ctx_.flood_bound();
    for (std::size_t f = 0; f < op.param; ++f) {
      sim_.label("zero_enc_check");
      sim_.bounded(3, n);
      sim_.bounded(2 * bf + 1, 2 * n);
      for (std::size_t i = 0; i < level; ++i) {
        BigInt u = sim_.transform(3, n, q(i), true);
        BigInt e[2] = {sim_.transform(2 * bf + 1, n, q(i), true), sim_.transform(2 * bf + 1, n, q(i), true)};
        const BigInt tq = t_ % q(i);
        for (std::size_t part = 0; part < 2; ++part) {
          const std::vector<std::pair<BigInt*, BigInt>> terms{{&out[part][i], 1}, {&u, q(i) - 1}, {&e[part], tq}};
          out[part][i] = sim_.linear(terms, q(i), n);
        }
      }
    }
    cts_[op.out] = std::move(out);
  }

  const FheCircuit& circuit_;
  const bgv::BgvContext& ctx_;
  const RingParams& ring_;
  std::size_t n_;
  u64 t_;
  r1cs::FieldParams field_;
  std::size_t rk_bits_;
  Sim sim_;
  std::map<std::string, Bounds> cts_;
  std::map<std::string, PtState> pts_;
};

}  // namespace

r1cs::CostStats model_costs(const FheCircuit& circuit, const CompileParams& params) {
  if (!params.ctx) throw Error(ErrorCode::kInvalidParams, "cost model needs a scheme context");
  return Model(circuit, params).run();
}

ChainLedger chain_measured(const r1cs::FieldParams& field, u64 q, std::size_t k, Schedule schedule) {
  BuildOptions opts;
  opts.schedule = schedule;
  opts.build_lcs = false;
  Builder b(field, 0, opts);
  Wire acc = b.witness(q);
  for (std::size_t i = 0; i < k; ++i) {
    Wire x = b.witness(q);
    acc = b.mul(acc, x, q);
  }
  if (acc.bound > q) b.reduce(acc, q);
  ChainLedger l;
  l.multiplications = k;
  l.reductions = b.stats().reductions_count;
  l.reduction_bits = b.stats().reductions_bits_total;
  l.constraints = b.stats().constraints_total;
  return l;
}

namespace {

BigInt chain_bound(u64 q, std::size_t factors) {
  BigInt b = 1;
  for (std::size_t i = 0; i < factors; ++i) b *= (q - 1);
  return b + 1;
}

}  // namespace

ChainLedger chain_analytic(const r1cs::FieldParams& field, u64 q, std::size_t k, Schedule schedule) {
  ChainLedger l;
  l.multiplications = k;
  const std::size_t qbits = bit_length(BigInt(q));
  if (schedule == Schedule::kEager) {
    l.reductions = k;
    l.constraints = k * (1 + reduce_cost(chain_bound(q, 2), q));
  } else {
    // c factors fit; the accumulator is reduced each time a product would
    // reach c + 1 factors, i.e. every c - 1 products after the first c - 1.
    std::size_t c = 1;
    auto fits = [&](const BigInt& b) {
      return b < field.p() && (BigInt(1) << bit_length((b - 1) / q)) * q + q < field.p();
    };
    while (fits(chain_bound(q, c + 1))) ++c;
    if (c < 2) throw Error(ErrorCode::kFieldOverflow, "a single product overflows the field");
    const std::size_t inner = k >= c ? (k - c) / (c - 1) + 1 : 0;
    const std::size_t final_factors = 1 + (k - inner * (c - 1));
    l.reductions = inner + (k > 0 ? 1 : 0);
    l.constraints = k + inner * reduce_cost(chain_bound(q, c), q);
    if (k > 0) l.constraints += reduce_cost(chain_bound(q, final_factors), q);
  }
  l.reduction_bits = l.reductions * qbits;
  return l;
}

std::size_t measured_capacity(const r1cs::FieldParams& field, u64 q) {
  BuildOptions opts;
  opts.build_lcs = false;
  Builder b(field, 0, opts);
  Wire acc = b.witness(q);
  std::size_t factors = 1;
  for (;;) {
    Wire x = b.witness(q);
    acc = b.mul(acc, x, q);
    if (b.stats().reductions_count > 0) return factors;
    ++factors;
  }
}

std::size_t analytic_capacity(std::size_t p_bits, std::size_t q_bits) {
  if (q_bits == 0) throw Error(ErrorCode::kInvalidParams, "zero-width modulus");
  return p_bits / q_bits;
}

OverheadReport reduction_overhead(std::size_t p_bits, std::size_t q_bits, std::size_t limbs,
                                  std::size_t k) {
  if (limbs == 0 || q_bits % limbs != 0) throw Error(ErrorCode::kInvalidParams, "limbs must split q evenly");
  OverheadReport r;
  const std::size_t width = q_bits / limbs;
  const std::size_t cap = analytic_capacity(p_bits, width);
  r.eager_bits = k * q_bits;
  r.lazy_bits = limbs * ((k + cap - 1) / cap) * width;
  r.ratio = r.lazy_bits == 0 ? 0.0 : static_cast<double>(r.eager_bits) / static_cast<double>(r.lazy_bits);
  return r;
}

}  // namespace vfhe::compiler
