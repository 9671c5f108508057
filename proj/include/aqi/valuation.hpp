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

#include <map>
#include <utility>

#include "aqi/instance.hpp"
#include "aqi/io.hpp"

namespace aqi {

struct PacketValue {
  Rational utility;  // w_p D_p(|S_p|), zero past the deadline
  Rational delay;    // w_p C_p(d_p - A_p), zero past the deadline
  friend bool operator==(const PacketValue&, const PacketValue&) = default;
};

/// Z(S) with its parts. total = sum utility - sum delay - sum energy.
struct Valuation {
  Rational total;
  std::map<PacketId, PacketValue> per_packet;
  std::map<std::pair<Slot, long>, Rational> per_slot;  // (slot, server)

  Rational recompute() const {
    Rational sum = 0;
    for (const auto& [id, v] : per_packet) sum += v.utility - v.delay;
    for (const auto& [key, e] : per_slot) sum -= e;
    return sum;
  }
};

inline Json valuation_to_json(const Valuation& v) {
  Json j = Json::object();
  j["total"] = rational_to_json(v.total);
  j["per_packet"] = Json::array();
  for (const auto& [id, pv] : v.per_packet)
    j["per_packet"].push_back(Json{{"packet", id},
                                   {"utility", rational_to_json(pv.utility)},
                                   {"delay", rational_to_json(pv.delay)}});
  j["per_slot"] = Json::array();
  for (const auto& [key, e] : v.per_slot)
    j["per_slot"].push_back(Json{{"slot", key.first},
                                 {"server", key.second},
                                 {"energy", rational_to_json(e)}});
  return j;
}

/// Evaluates Z(S) from scratch. Discarded sub-packets count nowhere; d_p is
/// the latest slot holding a sub-packet of p.
inline Valuation evaluate_z(const Instance& inst, const Allocation& alloc) {
  check_allocation(inst, alloc);
  std::map<PacketId, std::pair<long, Slot>> sent;  // count, last slot
  std::map<std::pair<Slot, long>, long> load;
  for (const auto& [ref, bin] : alloc.entries) {
    if (bin.discard) continue;
    auto [it, fresh] = sent.try_emplace(ref.packet, 0, bin.slot);
    it->second.first += 1;
    it->second.second = std::max(it->second.second, bin.slot);
    load[{bin.slot, bin.server}] += 1;
  }
  Valuation v;
  for (const auto& [id, info] : sent) {
    const Packet& p = inst.packet(id);
    const auto [count, last] = info;
    PacketValue pv;
    if (!p.past_deadline(last)) {
      pv.utility = p.utility(count);
      pv.delay = p.delay(last - p.arrival);
    }
    v.per_packet[id] = pv;
  }
  for (const auto& [key, count] : load)
    v.per_slot[key] = inst.energy_of(key.second)(count);
  v.total = v.recompute();
  return v;
}

/// Per-packet and per-bin counts of an allocation: the only state the
/// increment depends on.
struct Occupancy {
  struct PacketState {
    long sent = 0;
    Slot last = 0;  // d_p^S; A_p while nothing is sent
  };
  std::map<PacketId, PacketState> packets;
  std::map<Bin, long> bins;

  PacketState packet(const Packet& p) const {
    auto it = packets.find(p.id);
    return it == packets.end() ? PacketState{0, p.arrival} : it->second;
  }
  long load(const Bin& b) const {
    auto it = bins.find(b);
    return it == bins.end() ? 0 : it->second;
  }

  /// Records (r, b). Slots before arrival (possible only in the locking-free
  /// reduction) leave d_p clamped at A_p.
  void add(const Packet& p, const Bin& b) {
    if (b.discard) return;
    PacketState st = packet(p);
    st.sent += 1;
    st.last = std::max(st.last, b.slot);
    packets[p.id] = st;
    bins[b] += 1;
  }
};

inline Occupancy occupancy(const Instance& inst, const Allocation& alloc) {
  Occupancy occ;
  for (const auto& [ref, bin] : alloc.entries)
    occ.add(inst.packet(ref.packet), bin);
  return occ;
}

/// ρ(r, b | S) from the closed form
///   ΔD_p(|S_p|) - Δg(|S_b|) - [C_p(max{d_p^S, t} - A_p) - C_p(d_p^S - A_p)],
/// weighted by w_p. With a deadline the packet part is the change of the
/// packet's net term, which is zero on either side of a missed deadline.
inline Rational rho_from(const Instance& inst, const Occupancy& occ,
                         const Packet& p, const Bin& b) {
  if (b.discard) return Rational(0);
  const Occupancy::PacketState st = occ.packet(p);
  const Slot finish = std::max(st.last, b.slot);
  const Rational energy = inst.energy_of(b.server).delta(occ.load(b));
  Rational packet_part;
  if (!p.deadline) {
    packet_part = p.weight * p.distortion.delta(st.sent) -
                  (p.delay(finish - p.arrival) - p.delay(st.last - p.arrival));
  } else {
    packet_part = p.term(st.sent + 1, finish) - p.term(st.sent, st.last);
  }
  return packet_part - energy;
}

/// ρ(r, b | S) = Z(S ∪ {(r, b)}) - Z(S). Zero for the discard bin.
inline Rational increment_rho(const Instance& inst, const Allocation& alloc,
                              const SubpacketRef& r, const Bin& b) {
  if (alloc.contains(r))
    throw Error(ErrorKind::kPrecondition, to_string(r) + " already allocated");
  check_allocation(inst, alloc);
  Allocation probe;
  probe.add(r, b);
  check_allocation(inst, probe);
  return rho_from(inst, occupancy(inst, alloc), inst.packet(r.packet), b);
}

/// Weight of edge (p, b_{t,i}) in the binary mini-slot graph:
/// V_p(t - A_p) - [g(i) - g(i-1)] with V_p = w_p [D_p(1) - C_p(t - A_p)],
/// forced to zero past the deadline. May be negative.
inline Rational binary_edge_weight(const Instance& inst, const Packet& p,
                                   Slot t, long position, long server = 0) {
  if (p.subpackets != 1)
    throw Error(ErrorKind::kPrecondition,
                "binary expansion requires unit packets");
  if (t < p.arrival || position < 1)
    throw Error(ErrorKind::kPrecondition,
                "binary edge needs t >= arrival and position >= 1");
  return p.term(1, t) - inst.energy_of(server).delta(position - 1);
}

}  // namespace aqi
