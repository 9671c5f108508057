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


// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include "aqi/aqi.hpp"

namespace {

using namespace aqi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string stats_text(const CampaignReport& rep, const std::string& check) {
  const CheckStats& s = rep.stats.at(check);
  return check + " pass=" + std::to_string(s.pass) + " fail=" + std::to_string(s.fail) +
         " skipped=" + std::to_string(s.skipped);
}

CampaignReport binary_campaign() {
  CampaignConfig cfg;
  cfg.seeds = 500;
  cfg.params.binary = true;
  cfg.params.packets = 6;
  cfg.params.horizon = 5;
  cfg.modes = {GenMode::kRandom, GenMode::kAdversarialLock, GenMode::kAdversarialBurst};
  cfg.checks = {"theorem1", "lemma1"};
  return campaign(cfg);
}

CampaignReport general_campaign() {
  CampaignConfig cfg;
  cfg.seeds = 200;
  cfg.params.packets = 5;
  cfg.params.max_k = 3;
  cfg.params.horizon = 5;
  cfg.modes = {GenMode::kRandom, GenMode::kAdversarialBurst};
  cfg.checks = {"theorem2", "lemma2", "lemma3"};
  return campaign(cfg);
}

Outcome c6() {
  Outcome out;
  std::string text;
  for (long packets : {3L, 6L}) {
    GenParams gp;
    gp.mode = GenMode::kAdversarialLock;
    gp.packets = packets;
    const RunBundle b = run(generate(gp), Algorithm::kMatching);
    const Rational r = *b.ratio->ratio;
    text += "packets=" + std::to_string(packets) + " ratio=" + to_string(r) + " ";
    if (r <= make_rational(51, 100) && !b.ratio->violation) out.pass = true;
  }
  out.detail = text;
  return out;
}

Outcome c7() {
  CampaignConfig cfg;
  cfg.seeds = 1000;
  cfg.samples = 10;
  cfg.params.packets = 5;
  cfg.params.max_k = 3;
  cfg.params.horizon = 5;
  cfg.params.servers = 2;
  cfg.modes = {GenMode::kRandom, GenMode::kAdversarialBurst};
  cfg.checks = {"increment-consistency", "submodularity"};
  const CampaignReport rep = campaign(cfg);
  const CheckStats& inc = rep.stats.at("increment-consistency");
  const CheckStats& sub = rep.stats.at("submodularity");
  Outcome out;
  out.pass = inc.pass >= 10000 && inc.fail == 0 && sub.pass + sub.counterexamples >= 1000 &&
             (sub.counterexamples == 0 || !rep.counterexamples.empty());
  out.detail = "increment triples=" + std::to_string(inc.pass) + " mismatches=" +
               std::to_string(inc.fail) + "; submodularity pairs=" +
               std::to_string(sub.pass + sub.counterexamples) +
               " documented counterexamples=" + std::to_string(sub.counterexamples);
  return out;
}

Outcome c8() {
  long mismatches = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenParams gp;
    gp.seed = seed;
    gp.binary = true;
    gp.packets = 6;
    gp.horizon = 5;
    gp.servers = 1 + static_cast<long>(seed % 2);
    const Instance inst = generate(gp);
    if (offline_opt_bruteforce(inst).valuation.total !=
        offline_opt_binary_matching(inst).weight)
      ++mismatches;
  }
  return {mismatches == 0, "100 instances, mismatches=" + std::to_string(mismatches)};
}

Outcome c9() {
  // One source, events at 0, 1, 3; e1 in slot 2, e2 in slot 4, so Δ₂ = 1.
  const Rational d = 10;
  const AoiModel model({{{0, 1, 3}, d}}, 8);
  const AoiSchedule s{{{0, 0}, 2}, {{0, 1}, 4}};
  const Rational delta2 = 1;
  const EventRef e3{0, 2};
  const Rational one_after = model.rho(e3, 5, s);
  const Rational two_after = model.rho(e3, 6, s);
  const bool ok = one_after == d - (delta2 + make_rational(1, 2)) &&
                  two_after == d - (2 * delta2 + 2) && model.rho(e3, 3, s) == 0 &&
                  model.rho(e3, 4, s) == 0;
  return {ok, "rho(e3,t+3)=" + to_string(one_after) + " rho(e3,t+4)=" +
                  to_string(two_after) + " rho(e3,t+1)=" + to_string(model.rho(e3, 3, s)) +
                  " rho(e3,t+2)=" + to_string(model.rho(e3, 4, s))};
}

Outcome c10() {
  CampaignConfig cfg;
  cfg.first_seed = 1000;
  cfg.seeds = 30;
  cfg.params.packets = 4;
  cfg.params.horizon = 4;
  cfg.modes = {GenMode::kRandom, GenMode::kAdversarialLock, GenMode::kAdversarialBurst};
  const CampaignReport a = campaign(cfg);
  const CampaignReport b = campaign(cfg);
  const bool json_same = campaign_to_json(a).dump() == campaign_to_json(b).dump();
  const bool csv_same = campaign_to_csv(a) == campaign_to_csv(b);
  return {json_same && csv_same,
          std::string("json ") + (json_same ? "identical" : "differs") + ", csv " +
              (csv_same ? "identical" : "differs")};
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int n, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char t[32];
    std::snprintf(t, sizeof t, "%.1fs", secs);
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " [" << t
              << "] " << o.detail << std::endl;
    all = all && o.pass;
  };

  CampaignReport bin;
  report(1, [&] {
    bin = binary_campaign();
    const CheckStats& s = bin.stats.at("theorem1");
    return Outcome{s.pass >= 500 && s.fail == 0, stats_text(bin, "theorem1")};
  });
  CampaignReport gen;
  report(2, [&] {
    gen = general_campaign();
    const CheckStats& s = gen.stats.at("theorem2");
    return Outcome{s.pass >= 200 && s.fail == 0, stats_text(gen, "theorem2")};
  });
  report(3, [&] {
    const CheckStats& s = bin.stats.at("lemma1");
    return Outcome{s.pass >= 500 && s.fail == 0, stats_text(bin, "lemma1")};
  });
  report(4, [&] {
    const CheckStats& s = gen.stats.at("lemma3");
    return Outcome{s.pass >= 200 && s.fail == 0, stats_text(gen, "lemma3")};
  });
  report(5, [&] {
    const CheckStats& s = gen.stats.at("lemma2");
    return Outcome{s.pass > 0 && s.fail == 0, stats_text(gen, "lemma2")};
  });
  report(6, c6);
  report(7, c7);
  report(8, c8);
  report(9, c9);
  report(10, c10);
  if (!gen.failures.empty() || !bin.failures.empty())
    std::cout << "failures: " << bin.failures.dump() << gen.failures.dump() << std::endl;
  std::cout << (all ? "all criteria passed" : "some criteria FAILED") << std::endl;
  return all ? 0 : 1;
}
