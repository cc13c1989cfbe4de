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

#include "vfhe/bench.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

namespace vfhe::bench {
namespace {

Json strip(Json j) {
  j.erase("environment");
  j.erase("phases");
  j.erase("timings");
  return j;
}

TEST(Run, ToyVerifiesAndDecrypts) {
  RunOptions o;
  const Json r = run_workload(o);
  EXPECT_EQ(r["schema"], kSchema);
  EXPECT_EQ(r["verdicts"]["verified"], true);
  EXPECT_EQ(r["verdicts"]["decrypted_correct"], true);
  EXPECT_GT(r["constraints"]["constraints_total"].get<std::size_t>(), 0u);
  for (const char* k : {"setup_s", "prover_s", "verifier_s"}) EXPECT_TRUE(r["phases"].contains(k));
}

TEST(Run, TamperedMediumRejected) {
  RunOptions o;
  o.workload = "medium";
  o.tamper = true;
  const Json r = run_workload(o);
  EXPECT_EQ(r["verdicts"]["verified"], false);
  EXPECT_TRUE(r["verdicts"]["decrypted_correct"].is_null());
}

TEST(Run, FheOnlyHasNoConstraints) {
  RunOptions o;
  o.mode = Mode::kFheOnly;
  for (const auto* w : {"toy", "small", "medium"}) {
    o.workload = w;
    const Json r = run_workload(o);
    EXPECT_EQ(r["constraints"]["constraints_total"], 0);
    EXPECT_EQ(r["verdicts"]["decrypted_correct"], true) << w;
  }
}

TEST(Run, AttackDemoModeRejects) {
  RunOptions o;
  o.mode = Mode::kAttackDemo;
  for (const auto* w : {"toy", "small", "medium"}) {
    o.workload = w;
    EXPECT_EQ(run_workload(o)["verdicts"]["verified"], false) << w;
  }
}

TEST(Run, DeterministicUnderSeed) {
  for (const auto* w : {"toy", "small", "medium"}) {
    RunOptions o;
    o.workload = w;
    o.seed = 42;
    EXPECT_EQ(strip(run_workload(o)).dump(), strip(run_workload(o)).dump());
  }
}

TEST(Run, PresetTooSmallIsAParameterError) {
  RunOptions o;
  o.workload = "medium";
  o.preset = load_params("desk");
  try {
    run_workload(o);
    FAIL() << "medium ran at the two-limb preset";
  } catch (const Error& e) {
    EXPECT_EQ(exit_code_for(e), 3);
  }
  o.workload = "nope";
  EXPECT_THROW(run_workload(o), Error);
}

TEST(Params, PresetsAndFiles) {
  EXPECT_EQ(load_params("desk").params.moduli, (std::vector<u64>{257, 241}));
  EXPECT_EQ(load_params("desk-chain").params.moduli.size(), 3u);
  EXPECT_EQ(load_params("paper").params.degree, 8192u);
  const std::string path = ::testing::TempDir() + "vfhe_params.json";
  {
    std::ofstream out(path);
    out << params_json(bgv::BgvParams::desk_chain()).dump();
  }
  const auto p = load_params(path);
  EXPECT_EQ(p.params.moduli, bgv::BgvParams::desk_chain().moduli);
  EXPECT_EQ(p.params.plain_modulus, 17u);
  {
    std::ofstream out(path);
    out << R"({"degree": 8, "moduli": [257], "plain_modulus": 257})";
  }
  EXPECT_THROW(load_params(path), Error);
  std::remove(path.c_str());
  EXPECT_THROW(load_params("no-such-preset"), Error);
}

TEST(Compare, SelfIsEmpty) {
  const Json r = run_workload({});
  EXPECT_TRUE(report_compare(r, r).empty());
}

TEST(Compare, CountDriftFlagged) {
  const Json ref = run_workload({});
  Json r = ref;
  r["constraints"]["constraints_total"] = ref["constraints"]["constraints_total"].get<std::size_t>() + 1;
  const auto d = report_compare(r, ref);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].kind, "count");
  EXPECT_EQ(d[0].path, "/constraints/constraints_total");
}

TEST(Compare, TimingDriftUsesTolerance) {
  Json ref = run_workload({});
  ref["phases"]["prover_s"] = 1.0;
  Json r = ref;
  r["phases"]["prover_s"] = 1.2;
  EXPECT_TRUE(report_compare(r, ref, {0.25}).empty());
  r["phases"]["prover_s"] = 2.0;  // injected slowdown
  const auto d = report_compare(r, ref, {0.25});
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].kind, "timing");
  // Environment differences never count.
  r = ref;
  r["environment"]["compiler"] = "other";
  EXPECT_TRUE(report_compare(r, ref).empty());
}

TEST(Compare, MissingAndSchema) {
  const Json ref = run_workload({});
  Json r = ref;
  r.erase("r1cs");
  EXPECT_EQ(report_compare(r, ref).at(0).kind, "missing");
  Json bad = ref;
  bad["schema"] = "vfhe-report/0";
  EXPECT_THROW(report_compare(bad, ref), Error);
  EXPECT_THROW(report_compare(Json::array(), ref), Error);
}

TEST(Demo, AllAttacks) {
  for (const auto* a : {"bv-trivial", "relin-key", "overflow-oracle"}) {
    const auto d = demo(a, 7);
    EXPECT_TRUE(d.baseline_broken) << a;
    EXPECT_TRUE(d.vfhe_blocked) << a;
    EXPECT_FALSE(d.transcript.empty());
    EXPECT_EQ(d.report["schema"], kSchema);
  }
  EXPECT_THROW(demo("other", 1), Error);
}

TEST(Reports, OffloadEncodeExperiment) {
  const Json off = offload_report(8, load_params("desk"), 1, false);
  EXPECT_EQ(off["verdict"], "accept");
  EXPECT_EQ(off["rxr_ratio"], 4.0);
  EXPECT_EQ(offload_report(8, load_params("desk"), 1, true)["verdict"], "reject");
  const Json enc = encode_bench(1, false, 16);
  EXPECT_EQ(enc["roundtrip_ok"], true);
  EXPECT_EQ(enc["combination_ok"], true);
  EXPECT_EQ(enc["expansion"]["improvement_vs_regev"], 8.0);
  const Json ex = experiment_report("toy", "flip-output", 5, 1, load_params("desk-chain"));
  EXPECT_EQ(ex["accepted_wrong"], 0);
  EXPECT_EQ(ex["rejected"], 5);
  EXPECT_EQ(experiment_report("toy", "commitment", 5, 1, load_params("desk-chain"))["rejected"], 5);
  EXPECT_THROW(experiment_report("toy", "bogus", 1, 1, load_params("desk-chain")), Error);
}

}  // namespace
}  // namespace vfhe::bench
