// Copyright 2026 The AQI Scheduling Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line driver: generate instances, run the online algorithms,
// compute offline optima, verify the reduction chain and run campaigns.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aqi/aqi.hpp"

namespace {

using aqi::Json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw aqi::Error(aqi::ErrorKind::kLookup, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw aqi::Error(aqi::ErrorKind::kLookup, "cannot write " + out_path);
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// --budget beats AQI_BUDGET, which beats the built-in default.
long resolve_budget(std::optional<long> flag) {
  if (flag) {
    if (*flag <= 0)
      throw aqi::Error(aqi::ErrorKind::kParse, "--budget must be positive");
    return *flag;
  }
  return aqi::default_budget();
}

std::vector<aqi::Rational> parse_list(const std::string& text) {
  std::vector<aqi::Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(aqi::parse_rational(item));
  return out;
}

// The reference configuration of the multi-source AoI example: one source
// with events at 0, 1, 3 and value 10, horizon 8.
aqi::AoiModel default_aoi() {
  return aqi::AoiModel({{{0, 1, 3}, aqi::Rational(10)}}, 8);
}

aqi::AoiModel aoi_from_json(const Json& j) {
  std::vector<aqi::AoiSource> sources;
  for (const Json& s : aqi::io_detail::field(j, "sources", "$").get<std::vector<Json>>()) {
    aqi::AoiSource src;
    src.events = aqi::io_detail::field(s, "events", "$.sources").get<std::vector<long>>();
    src.value = aqi::rational_from_json(aqi::io_detail::field(s, "value", "$.sources"),
                                        "$.sources.value");
    sources.push_back(std::move(src));
  }
  return aqi::AoiModel(std::move(sources),
                       aqi::io_detail::field(j, "horizon", "$").get<long>());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online AQI scheduling: algorithms, oracles and verification"};
  app.require_subcommand(1);

  std::string out_path;
  std::string format = "json";
  std::optional<long> budget;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Output file (default stdout)");
    sub->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  // gen
  aqi::GenParams gp;
  std::string mode = "random";
  bool no_deadlines = false;
  std::string lock_value = "100", lock_bait = "1";
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  add_common(gen);
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--mode", mode, "random | adversarial-lock | adversarial-burst");
  gen->add_option("--packets", gp.packets, "Number of packets");
  gen->add_option("--max-k", gp.max_k, "Largest sub-packet count");
  gen->add_option("--horizon", gp.horizon, "Last slot index");
  gen->add_option("--servers", gp.servers, "Parallel servers");
  gen->add_flag("--binary", gp.binary, "One sub-packet per packet");
  gen->add_flag("--no-deadlines", no_deadlines, "Never draw deadlines");
  gen->add_option("--lock-value", lock_value, "Gadget value w (adversarial-lock)");
  gen->add_option("--lock-bait", lock_bait, "Gadget bait value (adversarial-lock)");
  gen->add_flag("--exact-oracle", gp.exact_oracle, "Enforce the exact-oracle size envelope");

  // run
  std::string instance_path;
  std::string algorithm = "greedy";
  std::string trace_path;
  bool require_opt = false, no_oracle = false, project = false;
  auto* run = app.add_subcommand("run", "Run an online algorithm on an instance");
  add_common(run);
  run->add_option("instance", instance_path, "Instance JSON")->required();
  run->add_option("--algorithm", algorithm, "matching | greedy");
  run->add_option("--trace", trace_path, "Write the trace / step log (JSON lines)");
  run->add_option("--budget", budget, "Oracle search-node budget");
  run->add_flag("--require-opt", require_opt, "Fail if OPT cannot be computed");
  run->add_flag("--no-oracle", no_oracle, "Skip the offline optimum");
  run->add_flag("--binary-projection", project, "Run on the one-sub-packet projection");

  // opt
  bool use_matching = false;
  auto* opt = app.add_subcommand("opt", "Offline optimum of an instance");
  add_common(opt);
  opt->add_option("instance", instance_path, "Instance JSON")->required();
  opt->add_option("--budget", budget, "Oracle search-node budget");
  opt->add_flag("--matching", use_matching, "Use the binary matching oracle");

  // verify
  std::string fault = "0";
  auto* verify = app.add_subcommand("verify", "Check the reduction chain on an instance");
  add_common(verify);
  verify->add_option("instance", instance_path, "Instance JSON")->required();
  verify->add_option("--budget", budget, "Oracle search-node budget");
  verify->add_option("--fault-offset", fault, "Corrupt mu on horizon bins (self-test)");

  // campaign
  aqi::CampaignConfig cc;
  cc.params.packets = 5;
  cc.params.max_k = 3;
  cc.params.horizon = 5;
  std::vector<std::string> modes{"random"};
  std::vector<std::string> checks;
  bool no_checks = false;
  auto* camp = app.add_subcommand("campaign", "Seeded verification campaign");
  add_common(camp);
  camp->add_option("--seed", cc.first_seed, "First seed");
  camp->add_option("--seeds", cc.seeds, "Number of seeds");
  camp->add_option("--packets", cc.params.packets, "Packets per instance");
  camp->add_option("--max-k", cc.params.max_k, "Largest sub-packet count");
  camp->add_option("--horizon", cc.params.horizon, "Last slot index");
  camp->add_option("--servers", cc.params.servers, "Parallel servers");
  camp->add_option("--modes", modes, "Generator modes, cycled by seed")->delimiter(',');
  camp->add_option("--checks", checks, "Subset of checks (default all)")->delimiter(',');
  camp->add_flag("--no-checks", no_checks, "Run with an empty check set");
  camp->add_option("--budget", budget, "Oracle search-node budget");
  camp->add_option("--samples", cc.samples, "Samples per seed for sampled checks");
  camp->add_option("--fault-offset", fault, "Corrupt mu on horizon bins (self-test)");
  camp->add_flag("--timing", cc.timing, "Record real runtimes (breaks byte-identity)");
  camp->add_option("--repro-dir", cc.repro_dir, "Directory for reproduction files");
  camp->add_flag("--exact-oracle", cc.params.exact_oracle, "Enforce the exact-oracle envelope");

  // adapters
  std::string config_path;
  long capacity = 1;
  auto* aoi = app.add_subcommand("adapt-aoi", "Multi-source AoI instance");
  add_common(aoi);
  aoi->add_option("--config", config_path,
                  "JSON {horizon, sources:[{events, value}]} (default: reference example)");
  aoi->add_option("--capacity", capacity, "Free transmissions per slot");

  std::string jobs_text = "2@0";
  long servers = 2;
  std::string power_coef = "1";
  unsigned long power_exp = 2;
  long horizon = 4;
  bool mandatory = false;
  auto* ss = app.add_subcommand("adapt-speedscale", "Speed-scaling instance");
  add_common(ss);
  ss->add_option("--jobs", jobs_text, "Jobs as size@arrival, comma separated");
  ss->add_option("--servers", servers, "Number of servers");
  ss->add_option("--power-coef", power_coef, "g_i(k) = coef * k^exp");
  ss->add_option("--power-exp", power_exp, "Power exponent");
  ss->add_option("--horizon", horizon, "Last slot index");
  ss->add_flag("--mandatory", mandatory, "Weights large enough that nothing is dropped");

  aqi::RemoteSamplingParams rs;
  std::string fidelity = "0,7,10,11";
  auto* samp = app.add_subcommand("adapt-sampling", "Remote-sampling instance family");
  add_common(samp);
  samp->add_option("--seed", seed, "Generator seed");
  samp->add_option("--sources", rs.sources, "Number of sources");
  samp->add_option("--horizon", rs.horizon, "Last slot index");
  samp->add_option("--arrival-num", rs.arrival_num, "Arrival probability numerator");
  samp->add_option("--arrival-den", rs.arrival_den, "Arrival probability denominator");
  samp->add_option("--fidelity", fidelity, "D table over sub-packets, comma separated");
  samp->add_option("--max-delay-slope", rs.max_delay_slope, "Largest delay slope");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      gp.seed = seed;
      gp.mode = aqi::parse_gen_mode(mode);
      gp.deadlines = !no_deadlines;
      gp.lock_value = aqi::parse_rational(lock_value);
      gp.lock_bait = aqi::parse_rational(lock_bait);
      emit(out_path, aqi::store_instance(aqi::generate(gp)));
      return 0;
    }
    if (*run) {
      aqi::Instance inst = aqi::load_instance(read_file(instance_path));
      if (project) inst = aqi::binary_projection(inst);
      aqi::RunOptions ro;
      ro.with_oracle = !no_oracle;
      ro.require_opt = require_opt;
      ro.budget = resolve_budget(budget);
      const aqi::RunBundle b = aqi::run(inst, aqi::parse_algorithm(algorithm), ro);
      if (!trace_path.empty()) {
        emit(trace_path, b.trace_jsonl);
      }
      if (format == "csv") {
        std::string ratio = "n/a";
        if (b.ratio) ratio = b.ratio->ratio ? aqi::to_string(*b.ratio->ratio) : "undefined";
        emit(out_path,
             "seed,n_packets,total_subpackets,horizon,alg,alg_value,opt_value,ratio,runtime_ms\n" +
                 std::string("-,") + std::to_string(inst.packets.size()) + "," +
                 std::to_string(inst.total_subpackets()) + "," +
                 std::to_string(inst.horizon) + "," + b.algorithm + "," +
                 aqi::to_string(b.alg_value) + "," +
                 (b.opt_value ? aqi::to_string(*b.opt_value) : std::string("n/a")) + "," +
                 ratio + ",0\n");
      } else {
        emit(out_path, dump(aqi::bundle_to_json(b)));
      }
      for (const std::string& n : b.notes) std::cerr << "note: " << n << "\n";
      return b.ratio && b.ratio->violation ? 1 : 0;
    }
    if (*opt) {
      const aqi::Instance inst = aqi::load_instance(read_file(instance_path));
      Json j;
      if (use_matching) {
        const aqi::BinaryOptResult r = aqi::offline_opt_binary_matching(inst);
        j = Json{{"value", aqi::rational_to_json(r.weight)},
                 {"allocation", aqi::allocation_to_json(r.allocation)}};
      } else {
        const aqi::OracleResult r = aqi::offline_opt_bruteforce(inst, resolve_budget(budget));
        j = Json{{"value", aqi::rational_to_json(r.valuation.total)},
                 {"allocation", aqi::allocation_to_json(r.allocation)},
                 {"valuation", aqi::valuation_to_json(r.valuation)},
                 {"evaluations", r.evaluations}};
      }
      emit(out_path, dump(j));
      return 0;
    }
    if (*verify) {
      const aqi::Instance inst = aqi::load_instance(read_file(instance_path));
      const aqi::ChainReport rep = aqi::verify_theorem2_chain(
          inst, resolve_budget(budget), aqi::parse_rational(fault));
      emit(out_path, dump(aqi::chain_to_json(rep)));
      return rep.ok() ? 0 : 1;
    }
    if (*camp) {
      cc.modes.clear();
      for (const std::string& m : modes) cc.modes.push_back(aqi::parse_gen_mode(m));
      if (no_checks)
        cc.checks.clear();
      else if (!checks.empty())
        cc.checks = checks;
      cc.budget = resolve_budget(budget);
      cc.fault_offset = aqi::parse_rational(fault);
      std::ostringstream cmd;
      for (int i = 0; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--seed" || a == "--seeds") {
          ++i;  // replaced per failure
          continue;
        }
        cmd << (i ? " " : "") << a;
      }
      cc.command = cmd.str() + " --seeds 1";
      const aqi::CampaignReport rep = aqi::campaign(cc);
      emit(out_path, format == "csv" ? aqi::campaign_to_csv(rep)
                                     : dump(aqi::campaign_to_json(rep)));
      return rep.failed() > 0 ? 1 : 0;
    }
    if (*aoi) {
      const aqi::AoiModel model =
          config_path.empty() ? default_aoi()
                              : aoi_from_json(Json::parse(read_file(config_path)));
      emit(out_path, aqi::store_instance(model.to_instance(capacity)));
      return 0;
    }
    if (*ss) {
      std::vector<aqi::Job> jobs;
      std::stringstream in(jobs_text);
      std::string item;
      while (std::getline(in, item, ',')) {
        const auto at = item.find('@');
        if (at == std::string::npos)
          throw aqi::Error(aqi::ErrorKind::kParse, "job '" + item + "' is not size@arrival");
        jobs.push_back({std::stol(item.substr(0, at)), std::stol(item.substr(at + 1))});
      }
      aqi::SpeedScalingOptions so;
      so.mandatory = mandatory;
      const std::vector<aqi::CostFamily> powers{
          aqi::CostFamily::power(aqi::parse_rational(power_coef), power_exp)};
      emit(out_path, aqi::store_instance(
                         aqi::speed_scaling(jobs, servers, powers, horizon, so)));
      return 0;
    }
    if (*samp) {
      rs.fidelity = parse_list(fidelity);
      emit(out_path, aqi::store_instance(aqi::remote_sampling_family(rs, seed)));
      return 0;
    }
  } catch (const aqi::Error& e) {
    std::cerr << "error (" << aqi::to_string(e.kind()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
