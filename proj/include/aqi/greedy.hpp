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

// Online greedy allocator for general AQI. Each sub-packet is placed on
// arrival, irrevocably, in the unlocked bin with the largest increment.

#include <string>
#include <utility>
#include <vector>

#include "aqi/instance.hpp"
#include "aqi/io.hpp"
#include "aqi/valuation.hpp"

namespace aqi {

struct BinValue {
  Bin bin;
  Rational rho;
};

struct StepRecord {
  long step = 0;
  SubpacketRef resource;
  Bin chosen;
  Rational rho;
  std::vector<BinValue> alternatives;  // every scanned bin, scan order
  bool at_horizon = false;
};

struct GreedyState {
  explicit GreedyState(const Instance& instance) : inst(&instance) {}

  const Instance* inst;
  Allocation partial;
  Occupancy occ;
  Slot clock = 0;
  std::vector<StepRecord> step_log;

  /// B_t: regular bins of slots >= clock, then the discard bin.
  std::vector<Bin> unlocked_bins() const {
    std::vector<Bin> bins = regular_bins(*inst, clock);
    bins.push_back(Bin::discard_bin());
    return bins;
  }
};

/// Picks the argmax bin for r. Ties go to the first bin in Bin order:
/// regular bins before discard, then earliest slot, then lowest server.
inline StepRecord greedy_step(GreedyState& state, const SubpacketRef& r) {
  const Instance& inst = *state.inst;
  if (state.partial.contains(r))
    throw Error(ErrorKind::kPrecondition, to_string(r) + " already allocated");
  const Packet& p = inst.packet(r.packet);
  if (r.index < 1 || r.index > p.subpackets)
    throw Error(ErrorKind::kLookup, "unknown sub-packet " + to_string(r));
  if (p.arrival < state.clock)
    throw Error(ErrorKind::kSequencing,
                to_string(r) + " arrives before the current clock");
  state.clock = p.arrival;

  StepRecord rec;
  rec.step = static_cast<long>(state.step_log.size());
  rec.resource = r;
  bool have = false;
  for (const Bin& b : state.unlocked_bins()) {
    Rational v = rho_from(inst, state.occ, p, b);
    rec.alternatives.push_back({b, v});
    if (!have || v > rec.rho) {
      rec.rho = v;
      rec.chosen = b;
      have = true;
    }
  }
  rec.at_horizon = !rec.chosen.discard && rec.chosen.slot == inst.horizon &&
                   inst.horizon > state.clock;
  state.partial.add(r, rec.chosen);
  state.occ.add(p, rec.chosen);
  state.step_log.push_back(rec);
  return rec;
}

struct GreedyResult {
  Allocation raw;         // as placed, step by step
  Allocation allocation;  // same bins per packet, relabelled in index order
  Valuation valuation;
  std::vector<StepRecord> steps;
  std::vector<std::string> warnings;
};

/// Algorithm 2 over the resources in arrival order. A later sub-packet can
/// land in an earlier slot than its predecessor; Z only depends on the
/// multiset of bins per packet, so `allocation` relabels indices to be
/// slot-ordered without changing the value.
inline GreedyResult run_algorithm2(const Instance& inst) {
  require_valid(inst);
  GreedyState state(inst);
  GreedyResult out;
  for (const SubpacketRef& r : resource_order(inst)) {
    const StepRecord& rec = greedy_step(state, r);
    if (rec.at_horizon)
      out.warnings.push_back("argmax for " + to_string(r) +
                             " is at the horizon slot " +
                             std::to_string(inst.horizon) +
                             "; a later slot could be better");
  }
  out.raw = state.partial;
  out.allocation = canonicalize(state.partial);
  out.valuation = evaluate_z(inst, out.allocation);
  out.steps = std::move(state.step_log);
  return out;
}

inline std::string step_log_to_jsonl(const std::vector<StepRecord>& steps) {
  std::string out;
  for (const StepRecord& s : steps) {
    Json alts = Json::array();
    for (const BinValue& a : s.alternatives)
      alts.push_back(Json{{"bin", to_string(a.bin)}, {"rho", rational_to_json(a.rho)}});
    Json j{{"step", s.step},
           {"packet", s.resource.packet},
           {"index", s.resource.index},
           {"chosen_bin", to_string(s.chosen)},
           {"rho", rational_to_json(s.rho)},
           {"alternatives", alts}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace aqi
