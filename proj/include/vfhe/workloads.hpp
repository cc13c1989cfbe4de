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

#ifndef VFHE_WORKLOADS_HPP_
#define VFHE_WORKLOADS_HPP_

#include <string>
#include <vector>

#include "vfhe/bgv.hpp"
#include "vfhe/circuit.hpp"

namespace vfhe::workloads {

// toy:    y = x1 * x2 (tensoring only)
// small:  y = NoiseFlood(x * v + w), v and w server plaintexts
// medium: y = NoiseFlood(ModSwitch((x - w)^2)), w a server plaintext
const std::vector<std::string>& names();
compiler::FheCircuit circuit(const std::string& name);

// Client and server inputs of one run, and the expected plaintext output.
struct Inputs {
  std::map<std::string, bgv::Plaintext> client;
  std::map<std::string, bgv::Plaintext> server;
};
Inputs random_inputs(const std::string& name, const bgv::BgvContext& ctx, Prng& prng);
bgv::Plaintext expected_output(const std::string& name, const Inputs& in, u64 t);

// Negacyclic product in Z_t[X]/(X^N + 1).
bgv::Plaintext pt_mul(const bgv::Plaintext& a, const bgv::Plaintext& b, u64 t);

}  // namespace vfhe::workloads

#endif  // VFHE_WORKLOADS_HPP_
