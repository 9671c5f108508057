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

// Reduction of general AQI to locking-free online submodular maximization.
// Bins never lock in I_SM; instead a bin is worth nothing to resources that
// arrive after its counterpart would have locked. Greedy on I_SM with the
// RULE tie-break replays Algorithm 2 step for step.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "aqi/greedy.hpp"
#include "aqi/instance.hpp"
#include "aqi/io.hpp"
#include "aqi/oracle.hpp"
#include "aqi/valuation.hpp"

namespace aqi {

struct SMInstance {
  Instance inst;
  std::vector<SubpacketRef> resources;  // R_on
  std::vector<Bin> bins;                // every slot 0..T, then discard
  /// Mutation-test hook: added to μ on horizon-slot bins. Zero in real use.
  Rational fault_offset = 0;

  /// T_r <= T_b.
  bool eligible(const SubpacketRef& r, const Bin& b) const {
    return b.discard || inst.packet(r.packet).arrival <= b.slot;
  }

  /// μ(r, b | S) with S summarized by its occupancy.
  Rational mu(const Occupancy& occ, const SubpacketRef& r, const Bin& b) const {
    if (!eligible(r, b)) return Rational(0);
    Rational v = rho_from(inst, occ, inst.packet(r.packet), b);
    if (fault_offset != 0 && !b.discard && b.slot == inst.horizon) v += fault_offset;
    return v;
  }
};

inline SMInstance build_ism(const Instance& inst, const Rational& fault_offset = 0) {
  require_valid(inst);
  SMInstance ism;
  ism.inst = inst;
  ism.resources = resource_order(inst);
  ism.bins = regular_bins(inst, 0);
  ism.bins.push_back(Bin::discard_bin());
  ism.fault_offset = fault_offset;
  return ism;
}

/// Y(S): μ telescoped over S in R_on order. Resources missing from S count
/// as discarded.
inline Rational y_telescoped(const SMInstance& ism, const Allocation& alloc) {
  Occupancy occ;
  Rational y = 0;
  for (const SubpacketRef& r : ism.resources) {
    auto it = alloc.entries.find(r);
    if (it == alloc.entries.end()) continue;
    y += ism.mu(occ, r, it->second);
    occ.add(ism.inst.packet(r.packet), it->second);
  }
  return y;
}

struct SMGreedyResult {
  Allocation allocation;
  Rational value;
  std::vector<StepRecord> steps;
};

/// Greedy over all bins of I_SM. Ties go to bins with T_r <= T_b, then Bin
/// order, which is the greedy module's order on the bins it can see.
inline SMGreedyResult greedy_on_with_rule(const SMInstance& ism) {
  SMGreedyResult out;
  Occupancy occ;
  for (const SubpacketRef& r : ism.resources) {
    std::vector<Bin> scan;
    for (const Bin& b : ism.bins)
      if (ism.eligible(r, b)) scan.push_back(b);
    for (const Bin& b : ism.bins)
      if (!ism.eligible(r, b)) scan.push_back(b);
    StepRecord rec;
    rec.step = static_cast<long>(out.steps.size());
    rec.resource = r;
    bool have = false;
    for (const Bin& b : scan) {
      Rational v = ism.mu(occ, r, b);
      rec.alternatives.push_back({b, v});
      if (!have || v > rec.rho) {
        rec.rho = v;
        rec.chosen = b;
        have = true;
      }
    }
    out.allocation.add(r, rec.chosen);
    occ.add(ism.inst.packet(r.packet), rec.chosen);
    out.value += rec.rho;
    out.steps.push_back(std::move(rec));
  }
  return out;
}

namespace reduction_detail {

/// Sequences over {valid bins, E} of length <= k, padded with discards.
/// E is any bin that locked before the packet arrived: it adds to |S_p|
/// without adding value, and its load never matters to later resources.
inline void sequences(const std::vector<Bin>& alphabet, long k,
                      std::vector<Bin>& cur,
                      const std::function<void(const std::vector<Bin>&)>& emit) {
  emit(cur);
  if (static_cast<long>(cur.size()) == k) return;
  for (const Bin& b : alphabet) {
    cur.push_back(b);
    sequences(alphabet, k, cur, emit);
    cur.pop_back();
  }
}

inline oracle_detail::Problem y_problem(const Instance& inst) {
  oracle_detail::Problem pr;
  pr.energy = oracle_detail::energy_tables(inst);
  pr.packets = oracle_detail::packet_order(inst);
  for (PacketId id : pr.packets) {
    const Packet& p = inst.packet(id);
    std::vector<Bin> alphabet = regular_bins(inst, p.arrival);
    if (p.arrival > 0) alphabet.push_back(Bin::regular(0, 0));  // E
    std::vector<oracle_detail::Option> opts;
    std::set<std::pair<std::vector<std::pair<std::size_t, long>>, std::string>> seen;
    std::vector<Bin> cur;
    sequences(alphabet, p.subpackets, cur, [&](const std::vector<Bin>& seq) {
      oracle_detail::Option o;
      o.sequence = seq;
      while (static_cast<long>(o.sequence.size()) < p.subpackets)
        o.sequence.push_back(Bin::discard_bin());
      long n = 0;
      Slot last = p.arrival;
      std::map<std::size_t, long> uses;
      for (const Bin& b : seq) {
        if (b.slot >= p.arrival) {
          const Slot finish = std::max(last, b.slot);
          o.fixed += p.term(n + 1, finish) - p.term(n, last);
          last = finish;
          uses[oracle_detail::bin_index(inst, b)] += 1;
        }
        ++n;
      }
      o.uses.assign(uses.begin(), uses.end());
      if (seen.insert({o.uses, o.fixed.get_str()}).second) opts.push_back(std::move(o));
    });
    pr.options.push_back(std::move(opts));
  }
  return pr;
}

}  // namespace reduction_detail

struct YOptResult {
  Rational value;
  Allocation witness;
  long evaluations = 0;
};

/// Ω_SM: a Y-maximizing allocation of I_SM, placements in locked bins
/// included. Throws kBudget past the node budget.
inline YOptResult offline_opt_y(const Instance& inst, long budget = kDefaultBudget) {
  require_valid(inst);
  const oracle_detail::Problem pr = reduction_detail::y_problem(inst);
  oracle_detail::Search search(pr, budget);
  YOptResult out;
  out.value = search.maximize();
  out.witness = oracle_detail::to_allocation(pr, search.best_choice());
  out.evaluations = search.evaluations();
  return out;
}

struct LraReport {
  Rational z_omega;
  Rational y_omega;
  std::optional<Rational> y_omega_sm;  // unset when skipped
  bool zy_equal = false;
  bool bound_holds = false;
  bool skipped = false;
  std::string notice;
  Json witness;

  bool ok() const { return zy_equal && (skipped || bound_holds); }
};

/// Lemma 2 on one instance: Z(Ω) = Y(Ω) and Z(Ω) <= Y(Ω_SM).
inline LraReport verify_lemma_lra(const Instance& inst, const Allocation& omega,
                                  long budget = kDefaultBudget) {
  LraReport rep;
  try {
    check_allocation(inst, omega);
  } catch (const Error& e) {
    rep.notice = std::string("omega is infeasible: ") + e.what();
    rep.witness = Json{{"omega", allocation_to_json(omega)}};
    return rep;
  }
  const SMInstance ism = build_ism(inst);
  rep.z_omega = evaluate_z(inst, omega).total;
  rep.y_omega = y_telescoped(ism, omega);
  rep.zy_equal = rep.z_omega == rep.y_omega;
  try {
    YOptResult sm = offline_opt_y(inst, budget);
    rep.y_omega_sm = sm.value;
    rep.bound_holds = rep.z_omega <= sm.value;
    if (!rep.ok())
      rep.witness = Json{{"omega", allocation_to_json(omega)},
                         {"omega_sm", allocation_to_json(sm.witness)}};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kBudget) throw;
    rep.skipped = true;
    rep.notice = "Omega_SM search skipped: budget exceeded";
    if (!rep.zy_equal) rep.witness = Json{{"omega", allocation_to_json(omega)}};
  }
  return rep;
}

struct ChainReport {
  Rational z_g;
  Rational y_gsm;
  std::optional<Rational> y_omega_sm;
  Rational z_omega;
  // Z(G) = Y(G_SM); b_i = b̂_i for all i; 2 Y(G_SM) >= Y(Ω_SM);
  // Y(Ω_SM) >= Z(Ω). Unset when the Ω_SM search was skipped.
  std::vector<std::optional<bool>> links;
  bool theorem2 = false;  // 2 Z(G) >= Z(Ω)
  long first_divergent_step = -1;
  std::string notice;
  Json witnesses;

  bool lemma3() const { return links[0].value_or(false) && links[1].value_or(false); }
  bool ok() const {
    for (const auto& l : links)
      if (l.has_value() && !*l) return false;
    return theorem2;
  }
};

/// The full Theorem 2 chain on one instance. `fault_offset` corrupts μ for
/// harness self-tests.
inline ChainReport verify_theorem2_chain(const Instance& inst,
                                         long budget = kDefaultBudget,
                                         const Rational& fault_offset = 0) {
  ChainReport rep;
  const GreedyResult g = run_algorithm2(inst);
  const SMInstance ism = build_ism(inst, fault_offset);
  const SMGreedyResult gsm = greedy_on_with_rule(ism);
  const OracleResult omega = offline_opt_bruteforce(inst, budget);
  rep.z_g = g.valuation.total;
  rep.y_gsm = gsm.value;
  rep.z_omega = omega.valuation.total;
  bool same_steps = g.steps.size() == gsm.steps.size();
  for (std::size_t i = 0; same_steps && i < g.steps.size(); ++i) {
    if (!(g.steps[i].chosen == gsm.steps[i].chosen)) {
      same_steps = false;
      rep.first_divergent_step = static_cast<long>(i);
    }
  }
  rep.links.push_back(rep.z_g == rep.y_gsm);
  rep.links.push_back(same_steps);
  try {
    rep.y_omega_sm = offline_opt_y(inst, budget).value;
    rep.links.push_back(2 * rep.y_gsm >= *rep.y_omega_sm);
    rep.links.push_back(*rep.y_omega_sm >= rep.z_omega);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kBudget) throw;
    rep.links.push_back(std::nullopt);
    rep.links.push_back(std::nullopt);
    rep.notice = "Omega_SM search skipped: budget exceeded";
  }
  rep.theorem2 = 2 * rep.z_g >= rep.z_omega;
  if (!rep.ok()) {
    rep.witnesses = Json{{"G", allocation_to_json(g.raw)},
                         {"G_SM", allocation_to_json(gsm.allocation)},
                         {"Omega", allocation_to_json(omega.allocation)},
                         {"first_divergent_step", rep.first_divergent_step}};
  }
  return rep;
}

inline Json chain_to_json(const ChainReport& rep) {
  Json links = Json::array();
  for (const auto& l : rep.links) links.push_back(l ? Json(*l) : Json(nullptr));
  Json j{{"Z_G", rational_to_json(rep.z_g)},
         {"Y_GSM", rational_to_json(rep.y_gsm)},
         {"Y_OmegaSM", rep.y_omega_sm ? rational_to_json(*rep.y_omega_sm) : Json(nullptr)},
         {"Z_Omega", rational_to_json(rep.z_omega)},
         {"links", links},
         {"theorem2", rep.theorem2}};
  if (!rep.notice.empty()) j["notice"] = rep.notice;
  if (!rep.witnesses.is_null()) j["witnesses"] = rep.witnesses;
  return j;
}

}  // namespace aqi
