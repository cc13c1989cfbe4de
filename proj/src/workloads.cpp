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

#include "vfhe/workloads.hpp"

#include "vfhe/error.hpp"

namespace vfhe::workloads {

const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"toy", "small", "medium"};
  return n;
}

compiler::FheCircuit circuit(const std::string& name) {
  compiler::FheCircuit c(name);
  if (name == "toy") {
    c.input_ct("x1").input_ct("x2").tensor("y", "x1", "x2").output("y");
  } else if (name == "small") {
    c.input_ct("x").input_pt("v").input_pt("w");
    c.mul_pt("xv", "x", "v").add_pt("z", "xv", "w").noise_flood("y", "z", 1).output("y");
  } else if (name == "medium") {
    c.input_ct("x").input_pt("w");
    c.sub_pt("d", "x", "w").tensor("sq", "d", "d").mod_switch("ms", "sq");
    c.noise_flood("y", "ms", 1).output("y");
  } else {
    throw Error(ErrorCode::kInvalidParams, "unknown workload '" + name + "'");
  }
  return c;
}

namespace {

bgv::Plaintext uniform(std::size_t n, u64 bound, Prng& prng) {
  bgv::Plaintext m = bgv::Plaintext::zero(n);
  for (auto& c : m.coeffs) c = prng.uniform(bound);
  return m;
}

}  // namespace

Inputs random_inputs(const std::string& name, const bgv::BgvContext& ctx, Prng& prng) {
  const std::size_t n = ctx.degree();
  const u64 t = ctx.t();
  Inputs in;
  if (name == "toy") {
    in.client["x1"] = uniform(n, t, prng);
    in.client["x2"] = uniform(n, t, prng);
  } else if (name == "small") {
    in.client["x"] = uniform(n, t, prng);
    in.server["v"] = uniform(n, t, prng);
    in.server["w"] = uniform(n, t, prng);
  } else if (name == "medium") {
    in.client["x"] = uniform(n, t, prng);
    in.server["w"] = uniform(n, t, prng);
  } else {
    throw Error(ErrorCode::kInvalidParams, "unknown workload '" + name + "'");
  }
  return in;
}

bgv::Plaintext pt_mul(const bgv::Plaintext& a, const bgv::Plaintext& b, u64 t) {
  const std::size_t n = a.coeffs.size();
  bgv::Plaintext out = bgv::Plaintext::zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const u64 p = a.coeffs[i] * b.coeffs[j] % t;
      u64& slot = out.coeffs[(i + j) % n];
      slot = i + j < n ? (slot + p) % t : (slot + t - p) % t;
    }
  }
  return out;
}

bgv::Plaintext expected_output(const std::string& name, const Inputs& in, u64 t) {
  if (name == "toy") return pt_mul(in.client.at("x1"), in.client.at("x2"), t);
  if (name == "small") {
    bgv::Plaintext y = pt_mul(in.client.at("x"), in.server.at("v"), t);
    const auto& w = in.server.at("w");
    for (std::size_t i = 0; i < y.coeffs.size(); ++i) y.coeffs[i] = (y.coeffs[i] + w.coeffs[i]) % t;
    return y;
  }
  if (name == "medium") {
    bgv::Plaintext d = in.client.at("x");
    const auto& w = in.server.at("w");
    for (std::size_t i = 0; i < d.coeffs.size(); ++i) d.coeffs[i] = (d.coeffs[i] + t - w.coeffs[i]) % t;
    return pt_mul(d, d, t);
  }
  throw Error(ErrorCode::kInvalidParams, "unknown workload '" + name + "'");
}

}  // namespace vfhe::workloads
