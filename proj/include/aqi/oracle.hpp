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

// Offline optima. Exhaustive branch and bound for general AQI, one global
// matching for binary AQI, and the competitive-ratio report built on them.

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aqi/instance.hpp"
#include "aqi/matching.hpp"
#include "aqi/valuation.hpp"

namespace aqi {

inline constexpr long kDefaultBudget = 10'000'000;

/// Search-node budget: AQI_BUDGET if set to a positive integer, else the
/// default.
inline long default_budget() {
  if (const char* env = std::getenv("AQI_BUDGET")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
    throw Error(ErrorKind::kParse, std::string("AQI_BUDGET is not a positive integer: ") + env);
  }
  return kDefaultBudget;
}

namespace oracle_detail {

/// One way to place all sub-packets of a packet. `uses` lists the energy
/// bins it loads with multiplicities; everything else about its value is
/// load-independent and folded into `fixed`.
struct Option {
  std::vector<Bin> sequence;
  std::vector<std::pair<std::size_t, long>> uses;
  Rational fixed;
};

struct Problem {
  std::vector<PacketId> packets;              // R_on packet order
  std::vector<std::vector<Option>> options;   // per packet
  std::vector<std::vector<Rational>> energy;  // per bin index: g(0..N)
};

inline std::size_t bin_index(const Instance& inst, const Bin& b) {
  return static_cast<std::size_t>(b.slot * inst.servers + b.server);
}

inline std::vector<std::vector<Rational>> energy_tables(const Instance& inst) {
  const long n = inst.total_subpackets();
  std::vector<std::vector<Rational>> tables;
  for (Slot t = 0; t <= inst.horizon; ++t) {
    for (long s = 0; s < inst.servers; ++s) {
      std::vector<Rational> g;
      for (long x = 0; x <= n; ++x) g.push_back(inst.energy_of(s)(x));
      tables.push_back(std::move(g));
    }
  }
  return tables;
}

inline std::vector<PacketId> packet_order(const Instance& inst) {
  std::vector<PacketId> ids;
  for (const SubpacketRef& r : resource_order(inst))
    if (ids.empty() || ids.back() != r.packet) ids.push_back(r.packet);
  return ids;
}

class Search {
 public:
  Search(const Problem& pr, long budget) : pr_(pr), budget_(budget) {
    loads_.assign(pr.energy.size(), 0);
    choice_.assign(pr.packets.size(), 0);
  }

  long evaluations() const { return evaluations_; }

  /// Maximum total value. Options are tried best-first on their unloaded
  /// gain; subtrees whose bound cannot beat the incumbent are cut.
  Rational maximize() {
    order_.clear();
    for (const auto& opts : pr_.options) {
      std::vector<std::size_t> idx(opts.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::vector<Rational> g0;
      for (const Option& o : opts) g0.push_back(unloaded_gain(o));
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return g0[a] > g0[b]; });
      order_.push_back(std::move(idx));
    }
    best_ = 0;  // all-discard is always feasible and worth 0
    best_choice_.clear();
    for (const auto& opts : pr_.options) best_choice_.push_back(discard_option(opts));
    target_.reset();
    dfs(0, Rational(0));
    return best_;
  }

  /// First assignment in lexicographic option order whose value is
  /// `value`; with `value` the maximum this is the lex-smallest optimum.
  std::vector<std::size_t> lex_first(const Rational& value) {
    order_.clear();
    for (const auto& opts : pr_.options) {
      std::vector<std::size_t> idx(opts.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      order_.push_back(std::move(idx));
    }
    target_ = value;
    found_ = false;
    dfs(0, Rational(0));
    if (!found_)
      throw Error(ErrorKind::kInfeasible, "oracle lost its optimum on the lex pass");
    return best_choice_;
  }

  const std::vector<std::size_t>& best_choice() const { return best_choice_; }

 private:
  Rational gain(const Option& o) const {
    Rational v = o.fixed;
    for (const auto& [bin, c] : o.uses) {
      const auto& g = pr_.energy[bin];
      v -= g[static_cast<std::size_t>(loads_[bin] + c)] -
           g[static_cast<std::size_t>(loads_[bin])];
    }
    return v;
  }
  Rational unloaded_gain(const Option& o) const {
    Rational v = o.fixed;
    for (const auto& [bin, c] : o.uses) v -= pr_.energy[bin][static_cast<std::size_t>(c)];
    return v;
  }
  static std::size_t discard_option(const std::vector<Option>& opts) {
    for (std::size_t i = 0; i < opts.size(); ++i)
      if (opts[i].uses.empty() && opts[i].fixed == 0) return i;
    return 0;
  }

  /// Convex energy makes increments superadditive, so each remaining
  /// packet's gain against the current loads bounds what it can add.
  Rational bound(std::size_t depth) const {
    Rational sum = 0;
    for (std::size_t i = depth; i < pr_.options.size(); ++i) {
      Rational best = 0;
      for (const Option& o : pr_.options[i]) {
        Rational v = gain(o);
        if (v > best) best = v;
      }
      sum += best;
    }
    return sum;
  }

  void tick() {
    if (++evaluations_ > budget_)
      throw Error(ErrorKind::kBudget, "instance too large for exact oracle");
  }

  void dfs(std::size_t depth, const Rational& value) {
    tick();
    if (depth == pr_.options.size()) {
      if (target_) {
        if (value == *target_) {
          found_ = true;
          best_choice_ = choice_;
        }
      } else if (value > best_) {
        best_ = value;
        best_choice_ = choice_;
      }
      return;
    }
    const Rational b = bound(depth);
    if (target_ ? value + b < *target_ : value + b <= best_) return;
    for (std::size_t idx : order_[depth]) {
      const Option& o = pr_.options[depth][idx];
      const Rational v = gain(o);
      choice_[depth] = idx;
      for (const auto& [bin, c] : o.uses) loads_[bin] += c;
      dfs(depth + 1, value + v);
      for (const auto& [bin, c] : o.uses) loads_[bin] -= c;
      if (found_) return;
    }
  }

  const Problem& pr_;
  long budget_;
  long evaluations_ = 0;
  std::vector<long> loads_;
  std::vector<std::size_t> choice_;
  std::vector<std::vector<std::size_t>> order_;
  Rational best_ = 0;
  std::vector<std::size_t> best_choice_;
  std::optional<Rational> target_;
  bool found_ = false;
};

/// Nondecreasing bin sequences of length k over `alphabet` (already in
/// Bin order), in lexicographic order.
inline void multisets(const std::vector<Bin>& alphabet, long k, std::size_t from,
                      std::vector<Bin>& cur,
                      const std::function<void(const std::vector<Bin>&)>& emit) {
  if (static_cast<long>(cur.size()) == k) {
    emit(cur);
    return;
  }
  for (std::size_t i = from; i < alphabet.size(); ++i) {
    cur.push_back(alphabet[i]);
    multisets(alphabet, k, i, cur, emit);
    cur.pop_back();
  }
}

inline Problem z_problem(const Instance& inst) {
  Problem pr;
  pr.energy = energy_tables(inst);
  pr.packets = packet_order(inst);
  for (PacketId id : pr.packets) {
    const Packet& p = inst.packet(id);
    std::vector<Bin> alphabet = regular_bins(inst, p.arrival);
    alphabet.push_back(Bin::discard_bin());
    std::vector<Option> opts;
    std::vector<Bin> cur;
    multisets(alphabet, p.subpackets, 0, cur, [&](const std::vector<Bin>& seq) {
      Option o;
      o.sequence = seq;
      long n = 0;
      Slot last = p.arrival;
      std::map<std::size_t, long> uses;
      for (const Bin& b : seq) {
        if (b.discard) continue;
        ++n;
        last = std::max(last, b.slot);
        uses[bin_index(inst, b)] += 1;
      }
      o.uses.assign(uses.begin(), uses.end());
      o.fixed = p.term(n, last);
      opts.push_back(std::move(o));
    });
    pr.options.push_back(std::move(opts));
  }
  return pr;
}

inline Allocation to_allocation(const Problem& pr,
                                const std::vector<std::size_t>& choice) {
  Allocation alloc;
  for (std::size_t i = 0; i < pr.packets.size(); ++i) {
    const Option& o = pr.options[i][choice[i]];
    long j = 1;
    for (const Bin& b : o.sequence) alloc.add({pr.packets[i], j++}, b);
  }
  return alloc;
}

}  // namespace oracle_detail

struct OracleResult {
  Allocation allocation;
  Valuation valuation;
  long evaluations = 0;
};

/// Exact Z-maximizing allocation. Sub-packet slots are nondecreasing in
/// index and never before arrival; among optima the lexicographically
/// smallest one (packets in arrival order, bins in Bin order) is returned.
/// Throws kBudget once more than `budget` search nodes are visited.
inline OracleResult offline_opt_bruteforce(const Instance& inst,
                                           long budget = kDefaultBudget) {
  require_valid(inst);
  const oracle_detail::Problem pr = oracle_detail::z_problem(inst);
  oracle_detail::Search search(pr, budget);
  const Rational best = search.maximize();
  const auto choice = search.lex_first(best);
  OracleResult out;
  out.allocation = oracle_detail::to_allocation(pr, choice);
  out.valuation = evaluate_z(inst, out.allocation);
  out.evaluations = search.evaluations();
  if (out.valuation.total != best)
    throw Error(ErrorKind::kInfeasible, "oracle value disagrees with evaluate_z");
  return out;
}

struct BinaryOptResult {
  BinaryExpansion expansion;
  Matching matching;
  Rational weight;
  Allocation allocation;
};

/// Offline optimum of a binary instance: one max-weight matching over the
/// whole mini-slot graph.
inline BinaryOptResult offline_opt_binary_matching(const Instance& inst) {
  if (!inst.is_binary())
    throw Error(ErrorKind::kPrecondition, "binary expansion requires unit packets");
  BinaryOptResult out;
  out.expansion = expand_binary(inst);
  out.matching = offline_max_weight(out.expansion.graph);
  out.weight = out.matching.weight;
  out.allocation = matching_to_allocation(inst, out.expansion, out.matching);
  return out;
}

struct RatioReport {
  Rational alg;
  Rational opt;
  std::optional<Rational> ratio;  // unset when OPT = 0 or degenerate
  bool violation = false;         // ratio < 1/2
  bool degenerate = false;        // OPT < 0
  std::string text;
};

inline RatioReport competitive_ratio(const Rational& alg_value,
                                     const Rational& opt_value) {
  RatioReport r{alg_value, opt_value, std::nullopt, false, false, {}};
  if (opt_value < 0) {
    r.degenerate = true;
    r.text = "degenerate instance (OPT=" + to_string(opt_value) + " < 0)";
  } else if (opt_value == 0) {
    r.text = "undefined (OPT=0), alg=" + to_string(alg_value);
  } else {
    r.ratio = Rational(alg_value / opt_value);
    r.violation = *r.ratio < Rational(1, 2);
    r.text = to_string(*r.ratio);
    if (r.violation) r.text += " THEOREM VIOLATION (ratio < 1/2)";
  }
  return r;
}

inline Json ratio_to_json(const RatioReport& r) {
  return Json{{"alg", rational_to_json(r.alg)},
              {"opt", rational_to_json(r.opt)},
              {"ratio", r.ratio ? rational_to_json(*r.ratio) : Json(nullptr)},
              {"violation", r.violation},
              {"degenerate", r.degenerate},
              {"text", r.text}};
}

}  // namespace aqi
