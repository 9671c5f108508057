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


#pragma once

// Instance generation, single runs against the oracles, and seeded
// verification campaigns with JSON/CSV reports.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "aqi/greedy.hpp"
#include "aqi/instance.hpp"
#include "aqi/io.hpp"
#include "aqi/matching.hpp"
#include "aqi/oracle.hpp"
#include "aqi/reduction.hpp"
#include "aqi/rng.hpp"
#include "aqi/valuation.hpp"

namespace aqi {

enum class GenMode { kRandom, kAdversarialLock, kAdversarialBurst };

inline const char* to_string(GenMode m) {
  switch (m) {
    case GenMode::kRandom:
      return "random";
    case GenMode::kAdversarialLock:
      return "adversarial-lock";
    case GenMode::kAdversarialBurst:
      return "adversarial-burst";
  }
  return "?";
}

inline GenMode parse_gen_mode(const std::string& s) {
  if (s == "random") return GenMode::kRandom;
  if (s == "adversarial-lock") return GenMode::kAdversarialLock;
  if (s == "adversarial-burst") return GenMode::kAdversarialBurst;
  throw Error(ErrorKind::kParse, "unknown generator mode '" + s + "'");
}

struct GenParams {
  long packets = 4;
  long max_k = 2;
  Slot horizon = 4;
  long servers = 1;
  std::uint64_t seed = 0;
  GenMode mode = GenMode::kRandom;
  bool binary = false;
  bool deadlines = true;
  long max_value = 10;       // largest D increment
  long max_delay_slope = 3;  // largest linear C slope
  long max_energy_step = 4;  // largest g increment
  Rational lock_value = 100;  // w of the adversarial-lock gadget
  Rational lock_bait = 1;     // ε of the adversarial-lock gadget
  bool exact_oracle = false;  // enforce the desk-scale envelope
};

namespace harness_detail {

inline CostFamily concave_table(Rng& rng, long k, long max_value) {
  std::vector<long> inc;
  inc.push_back(rng.uniform(1, max_value));
  for (long i = 1; i < k; ++i) inc.push_back(rng.uniform(0, max_value));
  std::sort(inc.begin(), inc.end(), std::greater<long>());
  std::vector<Rational> table{Rational(0)};
  for (long d : inc) table.push_back(table.back() + d);
  return CostFamily::tabulated(table);
}

inline CostFamily convex_table(Rng& rng, long n, long max_step) {
  std::vector<long> inc;
  for (long i = 0; i < std::max<long>(n, 1); ++i) inc.push_back(rng.uniform(0, max_step));
  std::sort(inc.begin(), inc.end());
  std::vector<Rational> table{Rational(0)};
  for (long d : inc) table.push_back(table.back() + d);
  return CostFamily::tabulated(table);
}

inline CostFamily delay_family(Rng& rng, long max_slope) {
  if (rng.chance(1, 3)) return CostFamily::power(make_rational(rng.uniform(1, 2), 2), 2);
  return CostFamily::linear(Rational(rng.uniform(0, max_slope)));
}

/// One lock gadget in slots [base, base+1]: a cheap bait packet that only
/// pays in `base`, and two valuable packets competing for one free
/// transmission per slot. The online matcher spends `base` on the bait.
inline void lock_gadget(Instance& inst, PacketId first, Slot base,
                        const Rational& w, const Rational& eps) {
  auto unit = [&](PacketId id, Slot arrival, const Rational& value, Slot deadline) {
    Packet p;
    p.id = id;
    p.arrival = arrival;
    p.distortion = CostFamily::tabulated({Rational(0), value});
    p.delay_cost = CostFamily::zero();
    p.deadline = deadline;
    inst.packets.push_back(std::move(p));
  };
  unit(first, base, eps, base);
  unit(first + 1, base, w, base + 1);
  unit(first + 2, base + 1, w, base + 1);
}

}  // namespace harness_detail

/// Deterministic in the seed. Throws kValidation for unusable parameter
/// ranges and kPrecondition when --exact-oracle bounds are exceeded.
inline Instance generate(const GenParams& gp) {
  if (gp.packets < 0 || gp.max_k < 1 || gp.horizon < 0 || gp.servers < 1 ||
      gp.max_value < 1 || gp.max_delay_slope < 0 || gp.max_energy_step < 0)
    throw Error(ErrorKind::kValidation, "generator parameters out of range");
  if (gp.mode == GenMode::kAdversarialLock &&
      (gp.lock_value <= 0 || gp.lock_bait <= 0))
    throw Error(ErrorKind::kValidation, "lock gadget values must be positive");
  if (gp.exact_oracle && (gp.packets > 6 || gp.max_k > 3 || gp.horizon > 5))
    throw Error(ErrorKind::kPrecondition,
                "exact oracle needs <= 6 packets, <= 3 sub-packets, <= 6 slots");
  Rng rng(gp.seed);
  Instance inst;
  inst.label = std::string(to_string(gp.mode)) + " seed " + std::to_string(gp.seed);
  inst.horizon = gp.horizon;
  inst.servers = gp.servers;

  if (gp.mode == GenMode::kAdversarialLock) {
    const long blocks = std::max<long>(1, gp.packets / 3);
    inst.horizon = std::max<Slot>(gp.horizon, 2 * blocks - 1);
    inst.servers = 1;
    // Capacity one per slot: a second transmission costs more than
    // everything on offer.
    const Rational big = gp.lock_value * Rational(2 * blocks + 1) + gp.lock_bait + 1;
    inst.energy = {CostFamily::tabulated({Rational(0), Rational(0), big})};
    for (long b = 0; b < blocks; ++b)
      harness_detail::lock_gadget(inst, 3 * b, 2 * b, gp.lock_value, gp.lock_bait);
    require_valid(inst);
    return inst;
  }

  const bool burst = gp.mode == GenMode::kAdversarialBurst;
  std::vector<long> ks;
  for (long i = 0; i < gp.packets; ++i)
    ks.push_back(gp.binary ? 1 : rng.uniform(1, gp.max_k));
  long total = 0;
  for (long k : ks) total += k;
  inst.energy.clear();
  for (long s = 0; s < (burst ? 1 : gp.servers); ++s) {
    if (burst)
      inst.energy.push_back(CostFamily::power(Rational(rng.uniform(1, 2)), 2));
    else
      inst.energy.push_back(harness_detail::convex_table(rng, total, gp.max_energy_step));
  }
  const Slot burst_slot = burst ? rng.uniform(0, std::max<Slot>(gp.horizon / 2, 0)) : 0;
  for (long i = 0; i < gp.packets; ++i) {
    Packet p;
    p.id = i;
    p.arrival = burst ? burst_slot : rng.uniform(0, gp.horizon);
    p.subpackets = ks[static_cast<std::size_t>(i)];
    p.weight = make_rational(rng.uniform(2, 4), 2);
    p.distortion = harness_detail::concave_table(rng, p.subpackets, gp.max_value);
    p.delay_cost = burst ? CostFamily::linear(Rational(rng.uniform(0, 1)))
                         : harness_detail::delay_family(rng, gp.max_delay_slope);
    if (gp.deadlines && rng.chance(1, 4))
      p.deadline = p.arrival + rng.uniform(0, gp.horizon - p.arrival);
    inst.packets.push_back(std::move(p));
  }
  require_valid(inst);
  return inst;
}

/// Same packets with one sub-packet each.
inline Instance binary_projection(const Instance& inst) {
  Instance out = inst;
  out.label = inst.label + " (binary)";
  for (Packet& p : out.packets) p.subpackets = 1;
  return out;
}

// ---------------------------------------------------------------------------
// Single runs.

enum class Algorithm { kMatching, kGreedy };

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "matching") return Algorithm::kMatching;
  if (s == "greedy") return Algorithm::kGreedy;
  throw Error(ErrorKind::kParse, "unknown algorithm '" + s + "'");
}

struct RunOptions {
  bool with_oracle = true;
  bool require_opt = false;
  long budget = kDefaultBudget;
};

struct RunBundle {
  std::string algorithm;
  Rational alg_value;
  std::optional<Rational> opt_value;
  std::optional<RatioReport> ratio;
  Json allocation;
  std::string trace_jsonl;
  std::vector<std::string> notes;
};

inline RunBundle run(const Instance& inst, Algorithm alg, const RunOptions& opt = {}) {
  require_valid(inst);
  RunBundle out;
  if (alg == Algorithm::kMatching) {
    if (!inst.is_binary())
      throw Error(ErrorKind::kPrecondition, "matching requires a binary instance");
    out.algorithm = "matching";
    const BinaryExpansion ex = expand_binary(inst);
    const Algorithm1Result r = run_algorithm1(ex.graph);
    out.alg_value = r.perm.weight;
    out.allocation = allocation_to_json(matching_to_allocation(inst, ex, r.perm));
    out.trace_jsonl = trace_to_jsonl(r.trace);
    if (opt.with_oracle) out.opt_value = offline_opt_binary_matching(inst).weight;
  } else {
    out.algorithm = "greedy";
    const GreedyResult g = run_algorithm2(inst);
    out.alg_value = g.valuation.total;
    out.allocation = allocation_to_json(g.allocation);
    out.trace_jsonl = step_log_to_jsonl(g.steps);
    out.notes = g.warnings;
    if (opt.with_oracle || opt.require_opt) {
      try {
        out.opt_value = offline_opt_bruteforce(inst, opt.budget).valuation.total;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kBudget || opt.require_opt) throw;
        out.notes.push_back(std::string(e.what()) + "; OPT not reported");
      }
    }
  }
  if (out.opt_value) out.ratio = competitive_ratio(out.alg_value, *out.opt_value);
  return out;
}

inline Json bundle_to_json(const RunBundle& b) {
  Json j{{"algorithm", b.algorithm},
         {"alg_value", rational_to_json(b.alg_value)},
         {"opt_value", b.opt_value ? rational_to_json(*b.opt_value) : Json(nullptr)},
         {"ratio", b.ratio ? ratio_to_json(*b.ratio) : Json(nullptr)},
         {"allocation", b.allocation},
         {"notes", b.notes}};
  return j;
}

// ---------------------------------------------------------------------------
// Campaigns.

inline const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> names{
      "theorem1", "theorem2", "lemma1", "lemma2", "lemma3",
      "submodularity", "increment-consistency"};
  return names;
}

struct CampaignConfig {
  std::uint64_t first_seed = 0;
  long seeds = 200;
  GenParams params;
  std::vector<GenMode> modes{GenMode::kRandom};  // cycled by seed
  std::vector<std::string> checks = all_checks();
  long budget = kDefaultBudget;
  long samples = 5;           // per seed, for the sampled checks
  Rational fault_offset = 0;  // nonzero corrupts μ (self-test)
  bool timing = false;        // real runtime_ms instead of 0
  std::string repro_dir;      // where failing instances are written
  std::string command;        // command line recorded in repro files
};

struct CheckStats {
  long pass = 0;
  long fail = 0;
  long skipped = 0;
  long counterexamples = 0;  // documented, not failures
};

struct CsvRow {
  std::uint64_t seed = 0;
  long n_packets = 0;
  long total_subpackets = 0;
  Slot horizon = 0;
  std::string alg;
  Rational alg_value;
  std::optional<Rational> opt_value;
  long runtime_ms = 0;
};

struct CampaignReport {
  std::map<std::string, CheckStats> stats;
  Json failures = Json::array();
  Json counterexamples = Json::array();
  std::vector<CsvRow> rows;
  Json config;

  long failed() const {
    long n = 0;
    for (const auto& [name, s] : stats) n += s.fail;
    return n;
  }
};

namespace harness_detail {

/// A random allocation of a random subset of resources to feasible bins.
inline Allocation random_allocation(Rng& rng, const Instance& inst,
                                    const std::vector<SubpacketRef>& pool) {
  Allocation a;
  for (const SubpacketRef& r : pool) {
    if (!rng.chance(1, 2)) continue;
    const Packet& p = inst.packet(r.packet);
    const long choices = (inst.horizon - p.arrival + 1) * inst.servers + 1;
    const long c = rng.uniform(0, choices - 1);
    a.add(r, c == choices - 1 ? Bin::discard_bin()
                              : Bin::regular(p.arrival + c / inst.servers, c % inst.servers));
  }
  return a;
}

inline Bin random_bin(Rng& rng, const Instance& inst, const Packet& p) {
  const long choices = (inst.horizon - p.arrival + 1) * inst.servers + 1;
  const long c = rng.uniform(0, choices - 1);
  return c == choices - 1 ? Bin::discard_bin()
                          : Bin::regular(p.arrival + c / inst.servers, c % inst.servers);
}

/// Lemma 1 plus the per-arrival inequality behind Theorem 1, summed over
/// each arrival batch: Δ_batch + Σ ν_{b*} >= Σ w_{a b*} for the offline
/// partners b* of the batch's nodes. Returns an empty string when both hold.
inline std::string lemma1_violation(const BipartiteInstance& g,
                                    const Algorithm1Result& r,
                                    const Matching& opt) {
  for (const RightNode& b : g.right()) {
    const auto seq = rho_potential(r.trace, b.id);
    for (std::size_t i = 1; i < seq.size(); ++i)
      if (seq[i] < seq[i - 1])
        return "rho(" + b.label + ") drops from " + to_string(seq[i - 1]) +
               " to " + to_string(seq[i]) + " at event " + std::to_string(i);
  }
  std::map<NodeId, Rational> nu;
  for (const MatchedEdge& e : r.perm.edges) nu[e.right] = e.weight;
  for (const TraceEvent& ev : r.trace.events) {
    if (ev.kind != EventKind::kArrival) continue;
    Rational lhs = ev.delta, rhs = 0;
    for (NodeId a : ev.nodes)
      for (const MatchedEdge& e : opt.edges)
        if (e.left == a) {
          lhs += nu.count(e.right) ? nu[e.right] : Rational(0);
          rhs += e.weight;
        }
    if (lhs < rhs)
      return "arrival batch at t=" + std::to_string(ev.clock) + ": delta + nu = " +
             to_string(lhs) + " < " + to_string(rhs);
  }
  return {};
}

inline long elapsed_ms(std::chrono::steady_clock::time_point start) {
  return static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start)
                               .count());
}

}  // namespace harness_detail

inline Json gen_params_to_json(const GenParams& gp) {
  return Json{{"packets", gp.packets},
              {"max_k", gp.max_k},
              {"horizon", gp.horizon},
              {"servers", gp.servers},
              {"binary", gp.binary},
              {"deadlines", gp.deadlines},
              {"max_value", gp.max_value},
              {"max_delay_slope", gp.max_delay_slope},
              {"max_energy_step", gp.max_energy_step},
              {"lock_value", rational_to_json(gp.lock_value)},
              {"lock_bait", rational_to_json(gp.lock_bait)}};
}

/// Runs the requested checks over a seed range. Seeds are processed in
/// order and nothing time-dependent reaches the report unless `timing` is
/// set, so equal configs give byte-identical reports.
inline CampaignReport campaign(const CampaignConfig& cfg) {
  using harness_detail::elapsed_ms;
  CampaignReport rep;
  std::set<std::string> want(cfg.checks.begin(), cfg.checks.end());
  for (const std::string& c : want) {
    if (std::find(all_checks().begin(), all_checks().end(), c) == all_checks().end())
      throw Error(ErrorKind::kParse, "unknown check '" + c + "'");
    rep.stats[c] = CheckStats{};
  }
  Json modes = Json::array();
  for (GenMode m : cfg.modes) modes.push_back(to_string(m));
  rep.config = Json{{"first_seed", cfg.first_seed},
                    {"seeds", cfg.seeds},
                    {"params", gen_params_to_json(cfg.params)},
                    {"modes", modes},
                    {"checks", Json(std::vector<std::string>(want.begin(), want.end()))},
                    {"budget", cfg.budget},
                    {"samples", cfg.samples},
                    {"fault_offset", rational_to_json(cfg.fault_offset)}};
  if (want.empty() || cfg.seeds <= 0) return rep;

  for (long k = 0; k < cfg.seeds; ++k) {
    const std::uint64_t seed = cfg.first_seed + static_cast<std::uint64_t>(k);
    GenParams gp = cfg.params;
    gp.seed = seed;
    gp.mode = cfg.modes.empty() ? GenMode::kRandom : cfg.modes[k % cfg.modes.size()];
    const Instance inst = generate(gp);

    auto fail = [&](const std::string& check, const std::string& detail,
                    const Instance& which) {
      rep.stats[check].fail += 1;
      Json entry{{"seed", seed},
                 {"check", check},
                 {"detail", detail},
                 {"instance", instance_to_json(which)}};
      if (!cfg.repro_dir.empty()) {
        std::filesystem::create_directories(cfg.repro_dir);
        const std::string path = cfg.repro_dir + "/repro_" + check + "_seed" +
                                 std::to_string(seed) + ".json";
        Json repro{{"check", check},
                   {"detail", detail},
                   {"command", cfg.command + " --seed " + std::to_string(seed)},
                   {"instance", instance_to_json(which)}};
        std::ofstream(path) << repro.dump(2) << "\n";
        entry["repro"] = path;
      }
      rep.failures.push_back(std::move(entry));
    };

    // Binary side: Algorithm 1 against the offline matching.
    if (want.count("theorem1") || want.count("lemma1")) {
      const Instance bin = inst.is_binary() ? inst : binary_projection(inst);
      const auto start = std::chrono::steady_clock::now();
      const BinaryExpansion ex = expand_binary(bin);
      const Algorithm1Result r = run_algorithm1(ex.graph);
      const long ms = cfg.timing ? elapsed_ms(start) : 0;
      const Matching opt = offline_max_weight(ex.graph);
      rep.rows.push_back({seed, static_cast<long>(bin.packets.size()),
                          bin.total_subpackets(), bin.horizon, "matching",
                          r.perm.weight, opt.weight, ms});
      if (want.count("theorem1")) {
        if (2 * r.perm.weight >= opt.weight)
          rep.stats["theorem1"].pass += 1;
        else
          fail("theorem1", "W_PERM=" + to_string(r.perm.weight) +
                               " < W_OPT/2, W_OPT=" + to_string(opt.weight), bin);
      }
      if (want.count("lemma1")) {
        const std::string v = harness_detail::lemma1_violation(ex.graph, r, opt);
        if (v.empty())
          rep.stats["lemma1"].pass += 1;
        else
          fail("lemma1", v, bin);
      }
    }

    // General side: Algorithm 2, its I_SM replay and the brute-force OPT.
    if (want.count("theorem2") || want.count("lemma2") || want.count("lemma3")) {
      const auto start = std::chrono::steady_clock::now();
      const GreedyResult g = run_algorithm2(inst);
      const long ms = cfg.timing ? elapsed_ms(start) : 0;
      if (want.count("lemma3")) {
        const SMGreedyResult gsm = greedy_on_with_rule(build_ism(inst, cfg.fault_offset));
        std::string why;
        if (g.valuation.total != gsm.value)
          why = "Z(G)=" + to_string(g.valuation.total) + " != Y(G_SM)=" +
                to_string(gsm.value);
        for (std::size_t i = 0; why.empty() && i < g.steps.size(); ++i)
          if (!(g.steps[i].chosen == gsm.steps[i].chosen))
            why = "step " + std::to_string(i) + ": " + to_string(g.steps[i].chosen) +
                  " vs " + to_string(gsm.steps[i].chosen);
        if (why.empty())
          rep.stats["lemma3"].pass += 1;
        else
          fail("lemma3", why, inst);
      }
      std::optional<OracleResult> omega;
      if (want.count("theorem2") || want.count("lemma2")) {
        try {
          omega = offline_opt_bruteforce(inst, cfg.budget);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kBudget) throw;
        }
      }
      rep.rows.push_back({seed, static_cast<long>(inst.packets.size()),
                          inst.total_subpackets(), inst.horizon, "greedy",
                          g.valuation.total,
                          omega ? std::optional<Rational>(omega->valuation.total)
                                : std::nullopt,
                          ms});
      if (want.count("theorem2")) {
        if (!omega)
          rep.stats["theorem2"].skipped += 1;
        else if (2 * g.valuation.total >= omega->valuation.total)
          rep.stats["theorem2"].pass += 1;
        else
          fail("theorem2", "Z(G)=" + to_string(g.valuation.total) +
                               " < Z(OPT)/2, Z(OPT)=" +
                               to_string(omega->valuation.total), inst);
      }
      if (want.count("lemma2")) {
        if (!omega) {
          rep.stats["lemma2"].skipped += 1;
        } else {
          const LraReport lra = verify_lemma_lra(inst, omega->allocation, cfg.budget);
          if (!lra.ok())
            fail("lemma2", "Z(Omega)=" + to_string(lra.z_omega) + ", Y(Omega)=" +
                               to_string(lra.y_omega) + ", Y(Omega_SM)=" +
                               (lra.y_omega_sm ? to_string(*lra.y_omega_sm) : "n/a") +
                               (lra.notice.empty() ? "" : "; " + lra.notice), inst);
          else if (lra.skipped)
            rep.stats["lemma2"].skipped += 1;
          else
            rep.stats["lemma2"].pass += 1;
        }
      }
    }

    // Sampled valuation checks.
    if (want.count("increment-consistency") || want.count("submodularity")) {
      Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
      const auto pool = resource_order(inst);
      for (long s = 0; s < cfg.samples && !pool.empty(); ++s) {
        const SubpacketRef r = pool[static_cast<std::size_t>(
            rng.uniform(0, static_cast<long>(pool.size()) - 1))];
        std::vector<SubpacketRef> others;
        for (const SubpacketRef& x : pool)
          if (!(x == r)) others.push_back(x);
        const Allocation big = harness_detail::random_allocation(rng, inst, others);
        const Bin b = harness_detail::random_bin(rng, inst, inst.packet(r.packet));
        if (want.count("increment-consistency")) {
          Allocation plus = big;
          plus.add(r, b);
          const Rational rho = increment_rho(inst, big, r, b);
          const Rational dz = evaluate_z(inst, plus).total - evaluate_z(inst, big).total;
          if (rho == dz)
            rep.stats["increment-consistency"].pass += 1;
          else
            fail("increment-consistency",
                 "rho(" + to_string(r) + "," + to_string(b) + ")=" + to_string(rho) +
                     " but delta Z=" + to_string(dz), inst);
        }
        if (want.count("submodularity")) {
          Allocation small;
          for (const auto& [ref, bin] : big.entries)
            if (rng.chance(1, 2)) small.add(ref, bin);
          const Rational rs = increment_rho(inst, small, r, b);
          const Rational rt = increment_rho(inst, big, r, b);
          if (rs >= rt) {
            rep.stats["submodularity"].pass += 1;
          } else {
            rep.stats["submodularity"].counterexamples += 1;
            if (rep.counterexamples.size() < 20)
              rep.counterexamples.push_back(
                  Json{{"seed", seed},
                       {"check", "submodularity"},
                       {"resource", to_string(r)},
                       {"bin", to_string(b)},
                       {"rho_S", rational_to_json(rs)},
                       {"rho_T", rational_to_json(rt)},
                       {"S", allocation_to_json(small)},
                       {"T", allocation_to_json(big)}});
          }
        }
      }
    }
  }
  return rep;
}

inline Json campaign_to_json(const CampaignReport& rep) {
  Json checks = Json::object();
  for (const auto& [name, s] : rep.stats)
    checks[name] = Json{{"pass", s.pass},
                        {"fail", s.fail},
                        {"skipped", s.skipped},
                        {"counterexamples", s.counterexamples}};
  Json rows = Json::array();
  for (const CsvRow& r : rep.rows) {
    std::optional<RatioReport> ratio;
    if (r.opt_value) ratio = competitive_ratio(r.alg_value, *r.opt_value);
    rows.push_back(Json{{"seed", r.seed},
                        {"n_packets", r.n_packets},
                        {"total_subpackets", r.total_subpackets},
                        {"horizon", r.horizon},
                        {"alg", r.alg},
                        {"alg_value", rational_to_json(r.alg_value)},
                        {"opt_value", r.opt_value ? rational_to_json(*r.opt_value) : Json(nullptr)},
                        {"ratio", ratio && ratio->ratio ? rational_to_json(*ratio->ratio)
                                                        : Json(nullptr)},
                        {"runtime_ms", r.runtime_ms}});
  }
  return Json{{"config", rep.config},
              {"checks", checks},
              {"failed", rep.failed()},
              {"failures", rep.failures},
              {"counterexamples", rep.counterexamples},
              {"rows", rows}};
}

inline std::string campaign_to_csv(const CampaignReport& rep) {
  std::ostringstream out;
  out << "seed,n_packets,total_subpackets,horizon,alg,alg_value,opt_value,ratio,runtime_ms\n";
  for (const CsvRow& r : rep.rows) {
    std::string ratio = "undefined";
    if (r.opt_value) {
      RatioReport rr = competitive_ratio(r.alg_value, *r.opt_value);
      if (rr.ratio) ratio = to_string(*rr.ratio);
    } else {
      ratio = "n/a";
    }
    out << r.seed << "," << r.n_packets << "," << r.total_subpackets << ","
        << r.horizon << "," << r.alg << "," << to_string(r.alg_value) << ","
        << (r.opt_value ? to_string(*r.opt_value) : std::string("n/a")) << ","
        << ratio << "," << r.runtime_ms << "\n";
  }
  return out.str();
}

}  // namespace aqi
