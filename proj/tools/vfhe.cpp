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

// vfhe: command-line front end for workloads, attacks, offload and
// encoding benchmarks, and the file-based vFHE protocol.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>

#include "CLI11.hpp"
#include "json.hpp"
#include "vfhe/bench.hpp"
#include "vfhe/protocol.hpp"
#include "vfhe/workloads.hpp"

namespace fs = std::filesystem;
using vfhe::bench::Json;

namespace {

constexpr int kOk = 0;
constexpr int kRejected = 2;
constexpr int kParamError = 3;

struct Global {
  std::uint64_t seed = 1;
  std::string params = "desk-chain";
  std::string out;
  bool json = false;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw vfhe::Error(vfhe::ErrorCode::kInvalidParams, "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw vfhe::Error(vfhe::ErrorCode::kInvalidParams, "cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw vfhe::Error(vfhe::ErrorCode::kInvalidParams, "cannot write '" + path + "'");
  out << text;
}

Json read_json(const std::string& path) {
  const auto bytes = read_file(path);
  try {
    return Json::parse(bytes.begin(), bytes.end());
  } catch (const std::exception& e) {
    throw vfhe::Error(vfhe::ErrorCode::kMalformed, path + ": " + e.what());
  }
}

// Writes the report to --out and prints it (JSON or a one-line summary).
void emit(const Global& g, const Json& report, const std::string& summary) {
  if (!g.out.empty()) write_text(g.out, report.dump(2) + "\n");
  if (g.json) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << summary << "\n";
  }
}

// {"x": [c0, c1, ...]} or {"x": c} (constant polynomial).
vfhe::protocol::Plaintexts read_plaintexts(const std::string& path, std::size_t n, vfhe::u64 t) {
  vfhe::protocol::Plaintexts out;
  const Json doc = read_json(path);
  for (const auto& [name, v] : doc.items()) {
    vfhe::bgv::Plaintext m = vfhe::bgv::Plaintext::zero(n);
    if (v.is_number_unsigned()) {
      m = vfhe::bgv::Plaintext::constant(n, v.get<vfhe::u64>() % t);
    } else {
      const auto coeffs = v.get<std::vector<vfhe::u64>>();
      if (coeffs.size() > n) throw vfhe::Error(vfhe::ErrorCode::kInvalidParams, "too many coefficients for '" + name + "'");
      for (std::size_t i = 0; i < coeffs.size(); ++i) m.coeffs[i] = coeffs[i] % t;
    }
    out[name] = m;
  }
  return out;
}

Json plaintexts_json(const vfhe::protocol::Plaintexts& p) {
  Json j;
  for (const auto& [name, m] : p) j[name] = m.coeffs;
  return j;
}

// Key directory: params.json, setup.json, sk/pk/rk.bin, issued.txt.
struct KeyDir {
  vfhe::bgv::BgvContextPtr ctx;
  std::shared_ptr<const vfhe::bgv::KeySet> fhe;
  std::string workload;
  fs::path dir;
};

void write_fhe_keys(const fs::path& dir, const vfhe::bench::Preset& preset, const vfhe::bgv::KeySet& keys) {
  fs::create_directories(dir);
  write_text((dir / "params.json").string(), vfhe::bench::params_json(preset.params).dump(2) + "\n");
  write_file((dir / "sk.bin").string(), vfhe::bgv::serialize(keys.sk));
  write_file((dir / "pk.bin").string(), vfhe::bgv::serialize(keys.pk));
  write_file((dir / "rk.bin").string(), vfhe::bgv::serialize(keys.rk));
}

KeyDir load_keys(const std::string& path) {
  KeyDir k;
  k.dir = path;
  const auto preset = vfhe::bench::load_params((k.dir / "params.json").string());
  k.ctx = vfhe::bgv::BgvContext::create(preset.params);
  vfhe::bgv::KeySet ks;
  ks.sk = vfhe::bgv::deserialize_secret_key(k.ctx, read_file((k.dir / "sk.bin").string()));
  ks.pk = vfhe::bgv::deserialize_public_key(k.ctx, read_file((k.dir / "pk.bin").string()));
  ks.rk = vfhe::bgv::deserialize_relin_key(k.ctx, read_file((k.dir / "rk.bin").string()));
  k.fhe = std::make_shared<const vfhe::bgv::KeySet>(std::move(ks));
  k.workload = read_json((k.dir / "setup.json").string()).at("workload").get<std::string>();
  return k;
}

vfhe::protocol::VfheKeys protocol_keys(const KeyDir& k) {
  auto keys = vfhe::protocol::kgen_with(vfhe::workloads::circuit(k.workload), k.ctx, k.fhe);
  const auto setup = read_json((k.dir / "setup.json").string());
  if (setup.at("fingerprint") != vfhe::digest_hex(vfhe::protocol::key_fingerprint(keys))) {
    throw vfhe::Error(vfhe::ErrorCode::kParamMismatch, "key directory does not match its setup record");
  }
  return keys;
}

vfhe::protocol::Client load_client(const KeyDir& k) {
  vfhe::protocol::Client client(protocol_keys(k));
  std::ifstream in(k.dir / "issued.txt");
  std::vector<vfhe::Digest> digests;
  for (std::string line; std::getline(in, line);) {
    if (line.size() != 64) continue;
    vfhe::Digest d{};
    for (std::size_t i = 0; i < 32; ++i) d[i] = static_cast<std::uint8_t>(std::stoul(line.substr(2 * i, 2), nullptr, 16));
    digests.push_back(d);
  }
  client.restore_issued(digests);
  return client;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vfhe: verifiable FHE toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the verb
  Global g;
  app.add_option("--seed", g.seed, "Root seed; every sub-seed is derived from it")->capture_default_str();
  app.add_option("--params", g.params, "Preset (desk, desk-chain, paper) or params JSON file")->capture_default_str();
  app.add_option("--out", g.out, "Write the JSON report to this path");
  app.add_flag("--json", g.json, "Print the full JSON report");

  int status = kOk;
  std::function<void()> action;

  // workload run|compile
  auto* workload = app.add_subcommand("workload", "Run or compile one of toy, small, medium");
  workload->require_subcommand(1);
  auto* run = workload->add_subcommand("run", "End-to-end run with phase timings");
  std::string wname = "toy", mode = "vfhe";
  bool tamper = false, expect_reject = false, full_paper = false;
  run->add_option("name", wname, "Workload")->check(CLI::IsMember({"toy", "small", "medium"}));
  run->add_option("--mode", mode, "fhe-only | vfhe | attack-demo")->capture_default_str();
  run->add_flag("--tamper", tamper, "Flip one output residue after evaluation");
  run->add_flag("--expect-reject", expect_reject, "A rejected result is the expected outcome");
  run->add_flag("--full", full_paper, "Also run witness generation at the paper preset");
  run->callback([&] {
    action = [&] {
      vfhe::bench::RunOptions o;
      o.workload = wname;
      o.preset = vfhe::bench::load_params(g.params);
      const auto m = vfhe::bench::parse_mode(mode);
      if (!m) throw vfhe::Error(vfhe::ErrorCode::kInvalidParams, "unknown mode '" + mode + "'");
      o.mode = *m;
      o.seed = g.seed;
      o.tamper = tamper;
      o.full_paper = full_paper;
      const Json r = vfhe::bench::run_workload(o);
      const auto& v = r["verdicts"];
      std::string summary = wname + " [" + r["mode"].get<std::string>() + ", " + o.preset.name + "]: constraints " +
                            std::to_string(r["constraints"]["constraints_total"].get<std::size_t>());
      if (!v["verified"].is_null()) summary += ", verified " + v["verified"].dump();
      if (!v["decrypted_correct"].is_null()) summary += ", decrypted correctly " + v["decrypted_correct"].dump();
      emit(g, r, summary);
      const bool rejected = v["verified"] == false;
      const bool wrong = v["decrypted_correct"] == false;
      if (expect_reject) {
        status = (rejected || (v["verified"].is_null() && wrong)) ? kOk : kRejected;
      } else if (rejected || wrong) {
        status = kRejected;
      }
    };
  });
  auto* comp = workload->add_subcommand("compile", "Compile and count constraints");
  std::string cname = "medium", export_path;
  bool eager = false, test_field = false;
  comp->add_option("name", cname, "Workload")->check(CLI::IsMember({"toy", "small", "medium"}));
  comp->add_flag("--eager", eager, "Reduce after every operation");
  comp->add_flag("--test-field", test_field, "Use p = 2^31 - 1 instead of BN254");
  comp->add_option("--export", export_path, "Write the R1CS text file (full build)");
  comp->callback([&] {
    action = [&] {
      vfhe::bench::CompileOptions o;
      o.workload = cname;
      o.preset = vfhe::bench::load_params(g.params);
      o.eager = eager;
      o.test_field = test_field;
      o.export_path = export_path;
      const Json r = vfhe::bench::compile_workload(o);
      emit(g, r,
           cname + " [" + o.preset.name + "]: " + std::to_string(r["constraints"]["constraints_total"].get<std::size_t>()) +
               " constraints (log2 " + std::to_string(r["reference_range"]["log2_constraints"].get<double>()) +
               "), cost model agrees: " + r["cost_model_agrees"].dump());
      if (r["cost_model_agrees"] != true) status = 1;
    };
  });

  // demo <attack>
  auto* demo = app.add_subcommand("demo", "Attack transcript: baseline vs verified client");
  std::string attack;
  demo->add_option("attack", attack, "bv-trivial | relin-key | overflow-oracle")
      ->required()
      ->check(CLI::IsMember({"bv-trivial", "relin-key", "overflow-oracle"}));
  demo->callback([&] {
    action = [&] {
      const auto d = vfhe::bench::demo(attack, g.seed);
      emit(g, d.report, d.transcript);
      if (!d.baseline_broken || !d.vfhe_blocked) status = 1;
    };
  });

  // offload
  auto* offload = app.add_subcommand("offload", "Schwartz-Zippel check of outsourced tensoring");
  std::size_t k = 8;
  std::string tamper_mode = "none";
  offload->add_option("--k", k, "Tensor products in the batch")->capture_default_str()->check(CLI::PositiveNumber);
  offload->add_option("--tamper", tamper_mode, "none | random")->check(CLI::IsMember({"none", "random"}));
  offload->add_flag("--expect-reject", expect_reject, "A rejected batch is the expected outcome");
  offload->callback([&] {
    action = [&] {
      const bool t = tamper_mode == "random";
      const Json r = vfhe::bench::offload_report(k, vfhe::bench::load_params(g.params), g.seed, t);
      emit(g, r, "offload k=" + std::to_string(k) + ": verdict " + r["verdict"].get<std::string>() +
                     ", R×R ratio " + r["rxr_ratio"].dump() + ", soundness bits " + r["soundness_bits"].dump());
      const bool rejected = r["verdict"] == "reject";
      status = expect_reject ? (rejected ? kOk : kRejected) : (rejected ? kRejected : kOk);
    };
  });

  // encode-bench
  auto* enc_bench = app.add_subcommand("encode-bench", "RLWE encoding roundtrip, combination and expansion");
  std::size_t trials = 64;
  bool paper_scale = false;
  enc_bench->add_option("--trials", trials, "Encodings")->capture_default_str()->check(CLI::PositiveNumber);
  enc_bench->add_flag("--paper", paper_scale, "N = 8192 source ring");
  enc_bench->callback([&] {
    action = [&] {
      const Json r = vfhe::bench::encode_bench(g.seed, paper_scale, trials);
      const auto& x = r["expansion"];
      emit(g, r, "encode-bench: roundtrip " + r["roundtrip_ok"].dump() + ", combination " + r["combination_ok"].dump() +
                     ", expansion analytic " + x["analytic"].dump() + " measured(pair) " + x["measured_pair"].dump());
      if (r["roundtrip_ok"] != true || r["combination_ok"] != true) status = 1;
    };
  });

  // experiment
  auto* exp = app.add_subcommand("experiment", "Soundness or predicate experiment");
  std::string exp_workload = "toy", strategy = "flip-output";
  std::size_t exp_trials = 100;
  exp->add_option("--workload", exp_workload, "toy | small | medium")->check(CLI::IsMember({"toy", "small", "medium"}));
  exp->add_option("--strategy", strategy,
                  "honest | flip-output | forge-witness | oversized-input | wrong-circuit | replay | range | commitment")
      ->capture_default_str();
  exp->add_option("--trials", exp_trials, "Trials")->capture_default_str()->check(CLI::PositiveNumber);
  exp->callback([&] {
    action = [&] {
      const Json r = vfhe::bench::experiment_report(exp_workload, strategy, exp_trials, g.seed,
                                                   vfhe::bench::load_params(g.params));
      std::string summary = "experiment " + strategy + ": trials " + r["trials"].dump() + ", rejected " + r["rejected"].dump();
      if (r.contains("accepted_wrong")) summary += ", accepted_wrong " + r["accepted_wrong"].dump();
      emit(g, r, summary);
      if (r.value("accepted_wrong", 0) > 0 || (r.contains("predicate") && r["accepted"] != 0)) status = kRejected;
    };
  });

  // compare
  auto* cmp = app.add_subcommand("compare", "Field-wise diff of two reports");
  std::string report_path, reference_path;
  double tolerance = 0.25, floor_s = 0.05;
  cmp->add_option("report", report_path)->required();
  cmp->add_option("reference", reference_path)->required();
  cmp->add_option("--timing-tolerance", tolerance, "Relative timing drift allowed")->capture_default_str();
  cmp->add_option("--timing-floor", floor_s, "Absolute drift (s) always allowed")->capture_default_str();
  cmp->callback([&] {
    action = [&] {
      const auto diffs = vfhe::bench::report_compare(read_json(report_path), read_json(reference_path), {tolerance, floor_s});
      const Json r = vfhe::bench::differences_json(diffs);
      std::string summary = diffs.empty() ? "no differences" : std::to_string(diffs.size()) + " difference(s)";
      for (const auto& d : diffs) summary += "\n  " + d.kind + " " + d.path + ": " + d.reference + " -> " + d.actual;
      emit(g, r, summary);
      if (!diffs.empty()) status = kRejected;
    };
  });

  // keygen (FHE keys only)
  auto* keygen = app.add_subcommand("keygen", "Write sk/pk/rk for a parameter set");
  std::string key_dir;
  keygen->add_option("dir", key_dir, "Output directory")->required();
  keygen->callback([&] {
    action = [&] {
      const auto preset = vfhe::bench::load_params(g.params);
      const auto ctx = vfhe::bgv::BgvContext::create(preset.params);
      write_fhe_keys(key_dir, preset, vfhe::bgv::keygen(ctx, vfhe::derive_seed(vfhe::seed_from_u64(g.seed), "kgen")));
      std::cout << "wrote sk.bin pk.bin rk.bin params.json to " << key_dir << "\n";
    };
  });

  // Protocol verbs over a key directory.
  auto* kgen = app.add_subcommand("kgen", "vFHE keys for a workload circuit");
  std::string kgen_workload = "toy";
  kgen->add_option("dir", key_dir, "Key directory")->required();
  kgen->add_option("--workload", kgen_workload)->check(CLI::IsMember({"toy", "small", "medium"}));
  kgen->callback([&] {
    action = [&] {
      const auto preset = vfhe::bench::load_params(g.params);
      const auto keys = vfhe::protocol::kgen(vfhe::workloads::circuit(kgen_workload), preset.params,
                                             vfhe::derive_seed(vfhe::seed_from_u64(g.seed), "kgen"));
      write_fhe_keys(key_dir, preset, *keys.fhe);
      Json setup = Json::object();
      setup["schema"] = vfhe::bench::kSchema;
      setup["workload"] = kgen_workload;
      setup["circuit_id"] = vfhe::digest_hex(keys.prover.setup->circuit_id);
      setup["fingerprint"] = vfhe::digest_hex(vfhe::protocol::key_fingerprint(keys));
      setup["constraints"] = keys.prover.setup->compiled.cs.constraints.size();
      write_text((fs::path(key_dir) / "setup.json").string(), setup.dump(2) + "\n");
      write_text((fs::path(key_dir) / "issued.txt").string(), "");
      std::cout << "circuit " << kgen_workload << " registered, id " << setup["circuit_id"].get<std::string>() << "\n";
    };
  });

  auto* enc = app.add_subcommand("enc", "Encrypt client inputs (also the input tag)");
  std::string inputs_path, ct_path;
  enc->add_option("dir", key_dir)->required();
  enc->add_option("--inputs", inputs_path, "JSON {name: [coeffs] | constant}")->required();
  enc->add_option("--ct", ct_path, "Ciphertext bundle to write")->required();
  enc->callback([&] {
    action = [&] {
      const auto kd = load_keys(key_dir);
      auto client = load_client(kd);
      const auto x = read_plaintexts(inputs_path, kd.ctx->degree(), kd.ctx->t());
      const auto e = client.encrypt(x, vfhe::derive_seed(vfhe::seed_from_u64(g.seed), "enc"));
      write_file(ct_path, vfhe::protocol::serialize_ciphertexts(e.c_x));
      std::ofstream issued(kd.dir / "issued.txt");
      for (const auto& d : client.issued_digests()) issued << vfhe::digest_hex(d) << "\n";
      std::cout << "encrypted " << x.size() << " input(s)\n";
    };
  });

  auto* eval = app.add_subcommand("eval", "Server: evaluate and produce the tag");
  std::string server_path, out_ct, tag_path;
  eval->add_option("dir", key_dir)->required();
  eval->add_option("--ct", ct_path, "Input ciphertext bundle")->required();
  eval->add_option("--server", server_path, "Server plaintexts JSON");
  eval->add_option("--out-ct", out_ct)->required();
  eval->add_option("--tag", tag_path)->required();
  eval->callback([&] {
    action = [&] {
      const auto kd = load_keys(key_dir);
      const auto keys = protocol_keys(kd);
      const auto c_x = vfhe::protocol::deserialize_ciphertexts(kd.ctx, read_file(ct_path));
      vfhe::protocol::Plaintexts w;
      if (!server_path.empty()) w = read_plaintexts(server_path, kd.ctx->degree(), kd.ctx->t());
      const auto ev = vfhe::protocol::eval(keys.prover, c_x, w, vfhe::derive_seed(vfhe::seed_from_u64(g.seed), "eval"));
      write_file(out_ct, vfhe::protocol::serialize_ciphertexts(ev.c_y));
      write_file(tag_path, ev.tau_y);
      std::cout << "evaluated; tag " << ev.tau_y.size() << " bytes\n";
    };
  });

  auto* verify = app.add_subcommand("verify", "Check a result against its input tag");
  std::string input_ct;
  verify->add_option("dir", key_dir)->required();
  verify->add_option("--ct", ct_path, "Result bundle")->required();
  verify->add_option("--input", input_ct, "Input bundle (tau_x)")->required();
  verify->add_option("--tag", tag_path)->required();
  verify->callback([&] {
    action = [&] {
      const auto kd = load_keys(key_dir);
      const auto keys = protocol_keys(kd);
      bool ok = false;
      try {
        ok = vfhe::protocol::verify(keys.verifier, vfhe::protocol::deserialize_ciphertexts(kd.ctx, read_file(ct_path)),
                                    vfhe::protocol::deserialize_ciphertexts(kd.ctx, read_file(input_ct)),
                                    read_file(tag_path));
      } catch (const vfhe::Error& e) {
        if (e.code() != vfhe::ErrorCode::kMalformed) throw;
      }
      std::cout << (ok ? "accept" : "reject") << "\n";
      status = ok ? kOk : kRejected;
    };
  });

  auto* dec = app.add_subcommand("dec", "Decrypt a bundle without verification");
  dec->add_option("dir", key_dir)->required();
  dec->add_option("--ct", ct_path)->required();
  dec->callback([&] {
    action = [&] {
      const auto kd = load_keys(key_dir);
      const auto c = vfhe::protocol::deserialize_ciphertexts(kd.ctx, read_file(ct_path));
      std::cout << plaintexts_json(vfhe::protocol::dec(kd.fhe->sk, kd.ctx, c)).dump() << "\n";
    };
  });

  auto* oracle = app.add_subcommand("oracle", "Verified decryption: plaintext or ⊥");
  oracle->add_option("dir", key_dir)->required();
  oracle->add_option("--ct", ct_path)->required();
  oracle->add_option("--input", input_ct)->required();
  oracle->add_option("--tag", tag_path)->required();
  oracle->callback([&] {
    action = [&] {
      const auto kd = load_keys(key_dir);
      const auto client = load_client(kd);
      std::optional<vfhe::protocol::Plaintexts> y;
      try {
        y = client.oracle_dec(vfhe::protocol::deserialize_ciphertexts(kd.ctx, read_file(ct_path)),
                              vfhe::protocol::deserialize_ciphertexts(kd.ctx, read_file(input_ct)), read_file(tag_path));
      } catch (const vfhe::Error& e) {
        if (e.code() != vfhe::ErrorCode::kMalformed) throw;
      }
      std::cout << (y ? plaintexts_json(*y).dump() : std::string("⊥")) << "\n";
      status = y ? kOk : kRejected;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParamError;
  }
  try {
    if (action) action();
  } catch (const vfhe::Error& e) {
    std::cerr << "vfhe: " << e.what() << "\n";
    return vfhe::bench::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "vfhe: " << e.what() << "\n";
    return 1;
  }
  return status;
}
