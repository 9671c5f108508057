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

// Instance builders for three special cases: multi-source age of
// information, speed scaling over parallel servers, and a remote-sampling
// style multi-source family.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aqi/instance.hpp"
#include "aqi/rng.hpp"

namespace aqi {

// ---------------------------------------------------------------------------
// Age of information.

struct AoiSource {
  std::vector<Slot> events;  // event times t_i, strictly increasing
  Rational value;            // D_s
};

struct EventRef {
  long source = 0;
  long index = 0;  // 0-based position in the source's event list
  friend auto operator<=>(const EventRef&, const EventRef&) = default;
};

using AoiSchedule = std::map<EventRef, Slot>;

/// Sawtooth increments. Placing event e of source s at slot k, with s_last
/// the latest slot already holding an event of s:
///   k <= s_last                -> 0 (the newer copy makes e stale)
///   otherwise, n = k - ref and Δ = ref - t_e with ref = max(s_last, t_e)
///                              -> D_s - (nΔ + n²/2)
/// nΔ + n²/2 is the area the sawtooth gains, half-unit triangles included.
/// Orderings the figure does not cover (e.g. an older event after a newer
/// one) fall under the same area rule.
class AoiModel {
 public:
  AoiModel(std::vector<AoiSource> sources, Slot horizon)
      : sources_(std::move(sources)), horizon_(horizon) {
    for (std::size_t s = 0; s < sources_.size(); ++s) {
      const auto& ev = sources_[s].events;
      for (std::size_t i = 0; i < ev.size(); ++i) {
        if (i > 0 && ev[i] <= ev[i - 1])
          throw Error(ErrorKind::kValidation,
                      "source " + std::to_string(s) + ": unordered event list");
        if (ev[i] < 0 || ev[i] > horizon_)
          throw Error(ErrorKind::kValidation,
                      "source " + std::to_string(s) + ": event outside [0, horizon]");
      }
      if (sources_[s].value < 0)
        throw Error(ErrorKind::kValidation, "source values must be non-negative");
    }
  }

  const std::vector<AoiSource>& sources() const { return sources_; }
  Slot horizon() const { return horizon_; }

  Slot event_time(const EventRef& e) const {
    if (e.source < 0 || e.source >= static_cast<long>(sources_.size()) ||
        e.index < 0 ||
        e.index >= static_cast<long>(sources_[e.source].events.size()))
      throw Error(ErrorKind::kLookup, "unknown event");
    return sources_[e.source].events[e.index];
  }

  Rational rho(const EventRef& e, Slot k, const AoiSchedule& schedule) const {
    const Slot te = event_time(e);
    if (k < te || k > horizon_)
      throw Error(ErrorKind::kPrecondition, "slot outside [event time, horizon]");
    std::optional<Slot> last;
    for (const auto& [other, slot] : schedule)
      if (other.source == e.source && !(other == e))
        last = last ? std::max(*last, slot) : slot;
    if (last && k <= *last) return Rational(0);
    const Slot ref = last ? std::max(*last, te) : te;
    const Rational n(k - ref);
    const Rational delta(ref - te);
    return sources_[e.source].value - (n * delta + n * n / 2);
  }

  /// Binary AQI stand-in: one unit packet per event with D = [0, D_s],
  /// C(x) = x²/2 and `capacity` free transmissions per slot (any more cost
  /// more than every source value combined).
  Instance to_instance(long capacity = 1) const {
    Instance inst;
    inst.label = "aoi-multisource";
    inst.horizon = horizon_;
    Rational total = 1;
    for (const AoiSource& s : sources_) total += s.value * Rational(s.events.size());
    std::vector<Rational> g(static_cast<std::size_t>(capacity) + 1, Rational(0));
    g.push_back(total);
    inst.energy = {CostFamily::tabulated(g)};
    PacketId id = 0;
    for (const AoiSource& s : sources_) {
      for (Slot t : s.events) {
        Packet p;
        p.id = id++;
        p.arrival = t;
        p.distortion = CostFamily::tabulated({Rational(0), s.value});
        p.delay_cost = CostFamily::power(Rational(1, 2), 2);
        inst.packets.push_back(std::move(p));
      }
    }
    return inst;
  }

 private:
  std::vector<AoiSource> sources_;
  Slot horizon_;
};

// ---------------------------------------------------------------------------
// Speed scaling.

struct Job {
  long size = 1;
  Slot arrival = 0;
};

struct SpeedScalingOptions {
  Rational flow_slope = 1;  // C_p(x) = flow_slope * x
  std::optional<Rational> unit_value;  // D_p slope; default flow_slope*T + 1
  bool mandatory = false;   // weights large enough that nothing is dropped
};

/// Jobs become packets of `size` unit sub-packets, bins are (slot, server)
/// and server i burns g_i. Sub-packets of one job may share a slot on
/// different servers.
inline Instance speed_scaling(const std::vector<Job>& jobs, long servers,
                              const std::vector<CostFamily>& powers, Slot horizon,
                              const SpeedScalingOptions& opt = {}) {
  if (servers < 1) throw Error(ErrorKind::kValidation, "need at least one server");
  Instance inst;
  inst.label = "speed-scaling";
  inst.horizon = horizon;
  inst.servers = servers;
  inst.energy = powers;
  const Rational unit = opt.unit_value ? *opt.unit_value
                                       : Rational(opt.flow_slope * Rational(horizon) + 1);
  long units = 0;
  for (const Job& j : jobs) units += j.size;
  Rational weight = 1;
  if (opt.mandatory) {
    // Each unit nets at least unit - flow_slope*T >= 1 before energy; scale
    // that above the steepest energy increment any server can reach.
    Rational steepest = 0;
    for (const CostFamily& g : powers)
      steepest = std::max(steepest, Rational(g.delta(std::max<long>(units - 1, 0))));
    Rational margin = unit - opt.flow_slope * Rational(horizon);
    if (margin <= 0)
      throw Error(ErrorKind::kValidation, "unit value too small for mandatory mode");
    weight = steepest / margin + 1;
  }
  PacketId id = 0;
  for (const Job& j : jobs) {
    Packet p;
    p.id = id++;
    p.arrival = j.arrival;
    p.subpackets = j.size;
    p.weight = weight;
    p.distortion = CostFamily::linear(unit);
    p.delay_cost = CostFamily::linear(opt.flow_slope);
    inst.packets.push_back(std::move(p));
  }
  require_valid(inst);
  return inst;
}

// ---------------------------------------------------------------------------
// Remote sampling.

struct RemoteSamplingParams {
  long sources = 2;
  Slot horizon = 5;
  long arrival_num = 1;  // per source and slot, a sample arrives with
  long arrival_den = 2;  // probability arrival_num / arrival_den
  std::vector<Rational> fidelity{0, 7, 10, 11};  // D over sub-packets
  long max_delay_slope = 2;  // C_p slope drawn from [1, max_delay_slope]
  Rational energy_coef = 1;  // g(k) = energy_coef * k^2
};

/// Multi-source samples whose fidelity improves with each sub-packet,
/// linear delay cost per source and one shared quadratic energy. The same
/// seed always gives the same instance.
inline Instance remote_sampling_family(const RemoteSamplingParams& params,
                                       std::uint64_t seed) {
  if (params.fidelity.size() < 2)
    throw Error(ErrorKind::kValidation, "fidelity table needs at least two entries");
  Rng rng(seed);
  Instance inst;
  inst.label = "remote-sampling seed " + std::to_string(seed);
  inst.horizon = params.horizon;
  inst.energy = {CostFamily::power(params.energy_coef, 2)};
  std::vector<Rational> slopes;
  for (long s = 0; s < params.sources; ++s)
    slopes.push_back(Rational(rng.uniform(1, std::max<long>(params.max_delay_slope, 1))));
  PacketId id = 0;
  for (Slot t = 0; t <= params.horizon; ++t) {
    for (long s = 0; s < params.sources; ++s) {
      if (!rng.chance(params.arrival_num, params.arrival_den)) continue;
      Packet p;
      p.id = id++;
      p.arrival = t;
      p.subpackets = static_cast<long>(params.fidelity.size()) - 1;
      p.distortion = CostFamily::tabulated(params.fidelity);
      p.delay_cost = CostFamily::linear(slopes[static_cast<std::size_t>(s)]);
      inst.packets.push_back(std::move(p));
    }
  }
  require_valid(inst);
  return inst;
}

}  // namespace aqi
