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

#include <algorithm>
#include <compare>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "aqi/cost.hpp"
#include "aqi/rational.hpp"

namespace aqi {

using PacketId = long;
using Slot = long;

inline constexpr Slot kNeverLocks = std::numeric_limits<Slot>::max();

struct Packet {
  PacketId id = 0;
  Slot arrival = 0;
  long subpackets = 1;
  Rational weight = 1;
  CostFamily distortion;  // D_p: utility of the first n sub-packets
  CostFamily delay_cost;  // C_p: cost of finishing d slots after arrival
  std::optional<Slot> deadline;

  /// w_p * D_p(n). The per-packet weight is folded in here rather than
  /// rewritten into the stored family, so serialization stays lossless.
  Rational utility(long n) const { return weight * distortion(n); }
  Rational delay(long d) const { return weight * delay_cost(d); }

  bool past_deadline(Slot last_slot) const {
    return deadline.has_value() && last_slot > *deadline;
  }

  /// Net term w_p [D_p(n) - C_p(d - A_p)] for n sub-packets finishing at
  /// last_slot; zero when nothing is sent or the deadline is missed.
  Rational term(long n, Slot last_slot) const {
    if (n == 0 || past_deadline(last_slot)) return Rational(0);
    return utility(n) - delay(last_slot - arrival);
  }

  friend bool operator==(const Packet&, const Packet&) = default;
};

struct Instance {
  std::string label;
  Slot horizon = 0;
  long servers = 1;
  std::vector<CostFamily> energy{CostFamily::zero()};
  std::vector<Packet> packets;

  const Packet& packet(PacketId id) const {
    for (const Packet& p : packets)
      if (p.id == id) return p;
    throw Error(ErrorKind::kLookup, "unknown packet " + std::to_string(id));
  }
  bool has_packet(PacketId id) const {
    return std::any_of(packets.begin(), packets.end(),
                       [&](const Packet& p) { return p.id == id; });
  }
  const CostFamily& energy_of(long server) const {
    return energy.size() == 1 ? energy.front()
                              : energy.at(static_cast<std::size_t>(server));
  }
  long total_subpackets() const {
    long n = 0;
    for (const Packet& p : packets) n += p.subpackets;
    return n;
  }
  bool is_binary() const {
    return std::all_of(packets.begin(), packets.end(),
                       [](const Packet& p) { return p.subpackets == 1; });
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct SubpacketRef {
  PacketId packet = 0;
  long index = 1;  // 1-based ordinal j within the packet

  friend auto operator<=>(const SubpacketRef&, const SubpacketRef&) = default;
};

/// A slot/server bin, or the never-locking discard bin.
struct Bin {
  Slot slot = 0;
  long server = 0;
  bool discard = false;

  static Bin regular(Slot slot, long server = 0) {
    return Bin{slot, server, false};
  }
  static Bin discard_bin() { return Bin{0, 0, true}; }

  /// Regular bins lock at the end of their slot.
  Slot lock_time() const { return discard ? kNeverLocks : slot; }

  /// Ordering used for every deterministic tie-break: regular bins by
  /// (slot, server), discard last.
  friend auto operator<=>(const Bin& a, const Bin& b) {
    return std::tuple(a.discard, a.discard ? 0 : a.slot,
                      a.discard ? 0 : a.server) <=>
           std::tuple(b.discard, b.discard ? 0 : b.slot,
                      b.discard ? 0 : b.server);
  }
  friend bool operator==(const Bin& a, const Bin& b) {
    return (a <=> b) == 0;
  }
};

inline std::string to_string(const Bin& b) {
  if (b.discard) return "discard";
  std::ostringstream out;
  out << "t" << b.slot;
  if (b.server != 0) out << "s" << b.server;
  return out.str();
}

inline std::string to_string(const SubpacketRef& r) {
  return "p" + std::to_string(r.packet) + "." + std::to_string(r.index);
}

/// S ⊆ R × B. The map key makes "each sub-packet at most once" structural.
struct Allocation {
  std::map<SubpacketRef, Bin> entries;

  bool contains(const SubpacketRef& r) const { return entries.count(r) > 0; }
  void add(const SubpacketRef& r, const Bin& b) {
    if (!entries.emplace(r, b).second) {
      throw Error(ErrorKind::kPrecondition,
                  to_string(r) + " is already allocated");
    }
  }
  std::size_t size() const { return entries.size(); }

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Every regular bin of the instance in (slot, server) order.
inline std::vector<Bin> regular_bins(const Instance& inst, Slot from = 0) {
  std::vector<Bin> bins;
  for (Slot t = std::max<Slot>(from, 0); t <= inst.horizon; ++t)
    for (long s = 0; s < inst.servers; ++s) bins.push_back(Bin::regular(t, s));
  return bins;
}

/// Resources in online order R_on: by arrival, then packet id, then index.
inline std::vector<SubpacketRef> resource_order(const Instance& inst) {
  std::vector<const Packet*> order;
  for (const Packet& p : inst.packets) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(),
                   [](const Packet* a, const Packet* b) {
                     return std::tie(a->arrival, a->id) <
                            std::tie(b->arrival, b->id);
                   });
  std::vector<SubpacketRef> out;
  for (const Packet* p : order)
    for (long j = 1; j <= p->subpackets; ++j) out.push_back({p->id, j});
  return out;
}

/// Structural check of an allocation against an instance: known packets,
/// valid ordinals, in-range bins, no bin before the packet's arrival.
/// Throws kStructural.
inline void check_allocation(const Instance& inst, const Allocation& alloc) {
  for (const auto& [ref, bin] : alloc.entries) {
    if (!inst.has_packet(ref.packet))
      throw Error(ErrorKind::kStructural,
                  "allocation references unknown packet " +
                      std::to_string(ref.packet));
    const Packet& p = inst.packet(ref.packet);
    if (ref.index < 1 || ref.index > p.subpackets)
      throw Error(ErrorKind::kStructural,
                  "allocation references unknown sub-packet " + to_string(ref));
    if (bin.discard) continue;
    if (bin.slot < 0 || bin.slot > inst.horizon || bin.server < 0 ||
        bin.server >= inst.servers)
      throw Error(ErrorKind::kStructural,
                  "allocation references unknown bin " + to_string(bin));
    if (bin.slot < p.arrival)
      throw Error(ErrorKind::kStructural,
                  to_string(ref) + " allocated to " + to_string(bin) +
                      " before its arrival at " + std::to_string(p.arrival));
  }
}

/// True when no sub-packet sits in a strictly later slot than a
/// higher-indexed sub-packet of the same packet (discards ignored).
inline bool is_index_ordered(const Allocation& alloc) {
  std::map<PacketId, Slot> last;
  for (const auto& [ref, bin] : alloc.entries) {
    if (bin.discard) continue;
    auto it = last.find(ref.packet);
    if (it != last.end() && bin.slot < it->second) return false;
    last[ref.packet] = bin.slot;
  }
  return true;
}

/// Relabels sub-packet ordinals so transmitted sub-packets take indices
/// 1..n in bin order and discarded ones follow. The valuation depends only on
/// per-packet counts and the last slot, so the value is unchanged.
inline Allocation canonicalize(const Allocation& alloc) {
  std::map<PacketId, std::vector<Bin>> per_packet;
  for (const auto& [ref, bin] : alloc.entries)
    per_packet[ref.packet].push_back(bin);
  Allocation out;
  for (auto& [id, bins] : per_packet) {
    std::sort(bins.begin(), bins.end());
    long j = 1;
    for (const Bin& b : bins) out.add({id, j++}, b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation of the modelling assumptions.

struct Violation {
  std::string where;  // "packet 3", "energy[0]", "instance"
  std::string what;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const {
    std::ostringstream out;
    for (const Violation& v : violations)
      out << v.where << ": " << v.what << "\n";
    return out.str();
  }
};

/// Lists every violated assumption: D_p non-decreasing with non-increasing
/// increments and D_p(0) = 0; C_p and g convex, non-decreasing, zero at 0;
/// arrivals within the horizon; deadline not before arrival; k_p >= 1;
/// w_p > 0. Functions are checked on the integer range the instance can
/// actually reach.
inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto add = [&](std::string where, std::string what) {
    report.violations.push_back({std::move(where), std::move(what)});
  };
  if (inst.horizon < 0) add("instance", "horizon must be non-negative");
  if (inst.servers < 1) add("instance", "servers must be at least 1");
  if (inst.energy.size() != 1 &&
      inst.energy.size() != static_cast<std::size_t>(inst.servers))
    add("instance", "energy needs one family or one per server");

  std::map<PacketId, int> seen;
  for (const Packet& p : inst.packets) {
    const std::string where = "packet " + std::to_string(p.id);
    if (++seen[p.id] == 2) add(where, "duplicate packet id");
    if (p.subpackets < 1) add(where, "sub-packet count must be at least 1");
    if (p.weight <= 0) add(where, "weight must be positive");
    if (p.arrival < 0) add(where, "arrival must be non-negative");
    if (p.arrival > inst.horizon)
      add(where, "arrival " + std::to_string(p.arrival) +
                     " beyond horizon " + std::to_string(inst.horizon));
    if (p.deadline && *p.deadline < p.arrival)
      add(where, "deadline precedes arrival");
    if (p.subpackets >= 1) {
      if (p.distortion(0) != 0) add(where, "D(0) must be 0");
      if (auto i = first_decrease(p.distortion, p.subpackets))
        add(where, "D decreases at i=" + std::to_string(*i));
      if (auto i = first_concavity_break(p.distortion, p.subpackets))
        add(where, "D increments increase at i=" + std::to_string(*i + 1));
    }
    const long span = std::max<long>(inst.horizon - p.arrival, 1);
    if (p.delay_cost(0) != 0) add(where, "C(0) must be 0");
    if (auto x = first_decrease(p.delay_cost, span))
      add(where, "C decreases at x=" + std::to_string(*x));
    if (auto x = first_convexity_break(p.delay_cost, span))
      add(where, "C not convex at x=" + std::to_string(*x));
  }
  const long reach = std::max<long>(inst.total_subpackets(), 2);
  for (std::size_t s = 0; s < inst.energy.size(); ++s) {
    const std::string where = "energy[" + std::to_string(s) + "]";
    const CostFamily& g = inst.energy[s];
    if (g(0) != 0) add(where, "g(0) must be 0");
    if (auto x = first_decrease(g, reach))
      add(where, "g decreases at k=" + std::to_string(*x));
    if (auto x = first_convexity_break(g, reach))
      add(where, "g not convex at k=" + std::to_string(*x));
  }
  return report;
}

/// Throws kValidation with the full report when the instance is invalid.
inline void require_valid(const Instance& inst) {
  ValidationReport report = validate_instance(inst);
  if (!report.ok())
    throw Error(ErrorKind::kValidation, "invalid instance:\n" + report.str());
}

}  // namespace aqi
