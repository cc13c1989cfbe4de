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

#ifndef VFHE_BENCH_HPP_
#define VFHE_BENCH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vfhe/bgv.hpp"
#include "vfhe/error.hpp"
#include "vfhe/r1cs.hpp"

// Report-producing drivers behind the `vfhe` command line.
namespace vfhe::bench {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "vfhe-report/1";

struct Preset {
  std::string name;  // "desk", "desk-chain", "paper" or the file path
  bgv::BgvParams params;
};
// A preset name or a JSON file {degree, moduli, plain_modulus, error_k,
// relin_base_bits, flood_bits}; missing keys take the desk values.
Preset load_params(const std::string& preset_or_file);
Json params_json(const bgv::BgvParams& p);

// Fields excluded from reproducibility comparisons.
Json environment();

enum class Mode { kFheOnly, kVfhe, kAttackDemo };
std::string mode_name(Mode m);
std::optional<Mode> parse_mode(const std::string& s);

struct RunOptions {
  std::string workload = "toy";
  Preset preset = {"desk-chain", bgv::BgvParams::desk_chain()};
  Mode mode = Mode::kVfhe;
  std::uint64_t seed = 1;
  bool tamper = false;  // flip one output residue after evaluation
  // The "paper" preset is compile-and-count only unless this is set.
  bool full_paper = false;
};
// Phase timings follow the FHE row semantics: setup = key generation
// (plus compilation), prover = homomorphic evaluation (plus witness),
// verifier = encryption, verification and decryption.
Json run_workload(const RunOptions& options);

struct CompileOptions {
  std::string workload = "medium";
  Preset preset = {"paper", bgv::BgvParams::paper()};
  bool eager = false;
  bool test_field = false;  // 2^31 - 1 instead of BN254
  std::string export_path;  // write the R1CS text file when set (full build)
};
Json compile_workload(const CompileOptions& options);

struct CompareOptions {
  double timing_tolerance = 0.25;  // relative
  // Drift below this many seconds is scheduler noise, never a regression.
  double timing_floor_s = 0.05;
};
struct Difference {
  std::string path;
  std::string kind;  // "value", "count", "timing", "missing", "extra"
  std::string reference;
  std::string actual;
};
// Field-wise comparison; environment fields are ignored, numbers under a
// timing key ("*_s", "timings", "phases") use the relative tolerance and
// every other value must match exactly. Throws kMalformed when either
// side is not a "vfhe-report/1" document.
std::vector<Difference> report_compare(const Json& report, const Json& reference,
                                       const CompareOptions& options = {});
Json differences_json(const std::vector<Difference>& diffs);

struct DemoResult {
  std::string transcript;
  bool baseline_broken = false;  // the attack worked without integrity
  bool vfhe_blocked = false;     // and failed against the verified client
  Json report;
};
// attack: "bv-trivial", "relin-key" or "overflow-oracle".
DemoResult demo(const std::string& attack, std::uint64_t seed);

Json offload_report(std::size_t k, const Preset& preset, std::uint64_t seed, bool tamper);
Json encode_bench(std::uint64_t seed, bool paper_scale, std::size_t trials);
Json experiment_report(const std::string& workload, const std::string& strategy, std::size_t trials,
                       std::uint64_t seed, const Preset& preset);

// 0 success, 2 verification failed, 3 parameter or input error, 1 anything
// else.
int exit_code_for(const Error& e);

}  // namespace vfhe::bench

#endif  // VFHE_BENCH_HPP_
