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

// Online maximum-weight matching with vertex locking.
//
// Left nodes arrive over time, right nodes lock at fixed times. The online
// algorithm keeps a tentative max-weight matching (TEMP) between unlocked
// nodes, recomputed on every arrival batch, and commits TEMP's edge at a
// right node when that node locks (PERM). The binary AQI instance maps onto
// this with packets on the left and energy mini-slots b_{t,i} on the right.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "aqi/instance.hpp"
#include "aqi/io.hpp"
#include "aqi/valuation.hpp"

namespace aqi {

using NodeId = long;

struct LeftNode {
  NodeId id = 0;
  Slot arrival = 0;
  std::string label;
};

struct RightNode {
  NodeId id = 0;
  Slot lock_time = 0;
  std::string label;
};

/// Weighted bipartite graph with arrival and lock metadata. Absent pairs
/// cannot be matched; stored weights are non-negative.
class BipartiteInstance {
 public:
  void add_left(NodeId id, Slot arrival, std::string label = {}) {
    if (left_index_.count(id))
      throw Error(ErrorKind::kStructural, "duplicate left node " + std::to_string(id));
    left_index_[id] = left_.size();
    left_.push_back({id, arrival, label.empty() ? "a" + std::to_string(id) : label});
  }
  void add_right(NodeId id, Slot lock_time, std::string label = {}) {
    if (right_index_.count(id))
      throw Error(ErrorKind::kStructural, "duplicate right node " + std::to_string(id));
    right_index_[id] = right_.size();
    right_.push_back({id, lock_time, label.empty() ? "b" + std::to_string(id) : label});
  }
  void set_weight(NodeId a, NodeId b, const Rational& w) {
    if (!left_index_.count(a) || !right_index_.count(b))
      throw Error(ErrorKind::kLookup, "edge references unknown node");
    if (w < 0)
      throw Error(ErrorKind::kStructural, "edge weights must be non-negative");
    weights_[{a, b}] = w;
  }

  const std::vector<LeftNode>& left() const { return left_; }
  const std::vector<RightNode>& right() const { return right_; }
  const std::map<std::pair<NodeId, NodeId>, Rational>& weights() const {
    return weights_;
  }
  const LeftNode& left_node(NodeId id) const { return left_.at(left_position(id)); }
  const RightNode& right_node(NodeId id) const { return right_.at(right_position(id)); }
  std::size_t left_position(NodeId id) const {
    auto it = left_index_.find(id);
    if (it == left_index_.end())
      throw Error(ErrorKind::kLookup, "unknown left node " + std::to_string(id));
    return it->second;
  }
  std::size_t right_position(NodeId id) const {
    auto it = right_index_.find(id);
    if (it == right_index_.end())
      throw Error(ErrorKind::kLookup, "unknown right node " + std::to_string(id));
    return it->second;
  }
  std::optional<Rational> weight(NodeId a, NodeId b) const {
    auto it = weights_.find({a, b});
    if (it == weights_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<LeftNode> left_;
  std::vector<RightNode> right_;
  std::map<NodeId, std::size_t> left_index_;
  std::map<NodeId, std::size_t> right_index_;
  std::map<std::pair<NodeId, NodeId>, Rational> weights_;
};

struct MatchedEdge {
  NodeId left = 0;
  NodeId right = 0;
  Rational weight;
  friend bool operator==(const MatchedEdge&, const MatchedEdge&) = default;
};

struct Matching {
  std::vector<MatchedEdge> edges;  // sorted by (left, right)
  Rational weight = 0;

  std::optional<MatchedEdge> at_right(NodeId b) const {
    for (const MatchedEdge& e : edges)
      if (e.right == b) return e;
    return std::nullopt;
  }
};

namespace matching_detail {

/// Cost with a secondary key; compared lexicographically. Maximizing weight
/// is minimizing -weight, and among equal weights the secondary key (sum of
/// 1 + right-node rank over matched edges) prefers fewer and earlier right
/// nodes, which fixes one canonical optimum.
struct Cost {
  Rational primary;
  long secondary = 0;

  Cost& operator+=(const Cost& o) {
    primary += o.primary;
    secondary += o.secondary;
    return *this;
  }
  Cost& operator-=(const Cost& o) {
    primary -= o.primary;
    secondary -= o.secondary;
    return *this;
  }
  friend Cost operator-(Cost a, const Cost& b) { return a -= b; }
  friend bool operator<(const Cost& a, const Cost& b) {
    int c = cmp(a.primary, b.primary);
    return c != 0 ? c < 0 : a.secondary < b.secondary;
  }
};

/// Min-cost assignment of every row to a distinct column (rows <= cols),
/// Hungarian method with potentials. Returns the column of each row.
inline std::vector<std::size_t> assign(
    const std::vector<std::vector<Cost>>& cost, const Cost& infinity) {
  const std::size_t n = cost.size();
  if (n == 0) return {};
  const std::size_t m = cost.front().size();
  std::vector<Cost> u(n + 1), v(m + 1);
  std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<Cost> minv(m + 1, infinity);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = owner[j0];
      Cost delta = infinity;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        Cost cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> column(n);
  for (std::size_t j = 1; j <= m; ++j)
    if (owner[j] != 0) column[owner[j] - 1] = j - 1;
  return column;
}

}  // namespace matching_detail

/// Maximum-weight matching between the given left and right node subsets,
/// required to contain every edge of `forced`. Forced pairs are contracted
/// out and their weight added back. Left nodes may stay unmatched.
/// Throws kInfeasible if forced edges share a node or are not in the graph.
inline Matching max_weight_matching(
    const BipartiteInstance& g, const std::vector<NodeId>& left_ids,
    const std::vector<NodeId>& right_ids,
    const std::vector<std::pair<NodeId, NodeId>>& forced = {}) {
  using matching_detail::Cost;
  Matching out;
  std::set<NodeId> forced_left, forced_right;
  for (const auto& [a, b] : forced) {
    auto w = g.weight(a, b);
    if (!w)
      throw Error(ErrorKind::kInfeasible, "forced edge (" + std::to_string(a) +
                                              "," + std::to_string(b) +
                                              ") is not in the graph");
    if (!forced_left.insert(a).second || !forced_right.insert(b).second)
      throw Error(ErrorKind::kInfeasible, "forced edges share a node");
    out.edges.push_back({a, b, *w});
    out.weight += *w;
  }
  std::vector<NodeId> rows, cols;
  for (NodeId a : left_ids)
    if (!forced_left.count(a)) rows.push_back(a);
  for (NodeId b : right_ids)
    if (!forced_right.count(b)) cols.push_back(b);
  std::sort(cols.begin(), cols.end(), [&](NodeId x, NodeId y) {
    return g.right_position(x) < g.right_position(y);
  });

  if (!rows.empty()) {
    Rational magnitude = 1;
    for (NodeId a : rows)
      for (NodeId b : cols)
        if (auto w = g.weight(a, b)) magnitude += abs(*w);
    const Cost absent{magnitude, 0};
    const long n = static_cast<long>(rows.size());
    const long m = static_cast<long>(cols.size());
    const Cost infinity{magnitude * Rational(8 * (n + m + 2)), 0};
    // One dummy column per row stands for "unmatched" at cost zero.
    std::vector<std::vector<Cost>> cost(rows.size(),
                                        std::vector<Cost>(cols.size() + rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        auto w = g.weight(rows[i], cols[j]);
        cost[i][j] = w ? Cost{-*w, static_cast<long>(g.right_position(cols[j])) + 1}
                       : absent;
      }
    }
    const auto column = matching_detail::assign(cost, infinity);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (column[i] >= cols.size()) continue;
      auto w = g.weight(rows[i], cols[column[i]]);
      if (!w) continue;
      out.edges.push_back({rows[i], cols[column[i]], *w});
      out.weight += *w;
    }
  }
  std::sort(out.edges.begin(), out.edges.end(),
            [](const MatchedEdge& x, const MatchedEdge& y) {
              return std::tie(x.left, x.right) < std::tie(y.left, y.right);
            });
  return out;
}

inline Matching max_weight_matching(
    const BipartiteInstance& g,
    const std::vector<std::pair<NodeId, NodeId>>& forced = {}) {
  std::vector<NodeId> l, r;
  for (const LeftNode& a : g.left()) l.push_back(a.id);
  for (const RightNode& b : g.right()) r.push_back(b.id);
  return max_weight_matching(g, l, r, forced);
}

/// Offline optimum: every node present, no locking, but only causal edges
/// (a right node that locks before a left node arrives can never take it).
inline Matching offline_max_weight(const BipartiteInstance& g) {
  BipartiteInstance causal;
  for (const LeftNode& a : g.left()) causal.add_left(a.id, a.arrival, a.label);
  for (const RightNode& b : g.right()) causal.add_right(b.id, b.lock_time, b.label);
  for (const auto& [key, w] : g.weights())
    if (g.left_node(key.first).arrival <= g.right_node(key.second).lock_time)
      causal.set_weight(key.first, key.second, w);
  return max_weight_matching(causal);
}

// ---------------------------------------------------------------------------
// Algorithm 1.

enum class EventKind { kArrival, kLock };

inline const char* to_string(EventKind k) {
  return k == EventKind::kArrival ? "arrival" : "lock";
}

struct TraceEvent {
  Slot clock = 0;
  EventKind kind = EventKind::kArrival;
  std::vector<NodeId> nodes;  // arriving left nodes or locking right nodes
  Rational temp_weight;       // weight of TEMP after the event
  Rational perm_weight;       // weight of PERM after the event
  Rational delta;             // change of W(A_t, B, L_t) across the event
  std::map<NodeId, Rational> rho;  // ρ_t(b) for every right node
};

struct RunTrace {
  std::vector<TraceEvent> events;
  std::vector<RightNode> right;  // for labels
};

struct MatchState {
  std::vector<MatchedEdge> perm;
  std::vector<MatchedEdge> temp;
  std::set<NodeId> arrived;
  std::set<NodeId> locked_left;
  std::set<NodeId> locked_right;
  Slot clock = 0;

  Rational perm_weight() const {
    Rational w = 0;
    for (const auto& e : perm) w += e.weight;
    return w;
  }
  Rational temp_weight() const {
    Rational w = 0;
    for (const auto& e : temp) w += e.weight;
    return w;
  }
};

struct Algorithm1Result {
  Matching perm;
  RunTrace trace;
};

struct ArrivalEvent {
  Slot time;
  NodeId node;
};
struct LockEvent {
  Slot time;
  NodeId node;
};

namespace matching_detail {

inline std::vector<NodeId> unlocked_left(const MatchState& st) {
  std::vector<NodeId> out;
  for (NodeId a : st.arrived)
    if (!st.locked_left.count(a)) out.push_back(a);
  return out;
}

inline std::vector<NodeId> unlocked_right(const BipartiteInstance& g,
                                          const MatchState& st) {
  std::vector<NodeId> out;
  for (const RightNode& b : g.right())
    if (!st.locked_right.count(b.id)) out.push_back(b.id);
  return out;
}

/// ρ_t(b) for every right node: ν_b once locked; otherwise the drop in
/// W(A_t, B, L_t) when b is removed, which is zero unless TEMP uses b.
inline std::map<NodeId, Rational> potentials(const BipartiteInstance& g,
                                             const MatchState& st) {
  std::map<NodeId, Rational> rho;
  const auto left = unlocked_left(st);
  const auto right = unlocked_right(g, st);
  const Rational with_all = st.temp_weight();
  for (const RightNode& b : g.right()) {
    if (st.locked_right.count(b.id)) {
      Rational nu = 0;
      for (const auto& e : st.perm)
        if (e.right == b.id) nu = e.weight;
      rho[b.id] = nu;
      continue;
    }
    const bool used = std::any_of(st.temp.begin(), st.temp.end(),
                                  [&](const MatchedEdge& e) { return e.right == b.id; });
    if (!used) {
      rho[b.id] = 0;
      continue;
    }
    std::vector<NodeId> without;
    for (NodeId r : right)
      if (r != b.id) without.push_back(r);
    rho[b.id] = with_all - max_weight_matching(g, left, without).weight;
  }
  return rho;
}

}  // namespace matching_detail

/// Runs Algorithm 1 on explicit event streams. Per time step all arrivals
/// are processed (TEMP recomputed once for the batch) before that step's
/// locks. Throws kSequencing if a stream is out of time order or disagrees
/// with the graph metadata.
inline Algorithm1Result run_algorithm1(const BipartiteInstance& g,
                                       const std::vector<ArrivalEvent>& arrivals,
                                       const std::vector<LockEvent>& locks) {
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    if (i > 0 && arrivals[i].time < arrivals[i - 1].time)
      throw Error(ErrorKind::kSequencing, "arrival stream out of order");
    if (g.left_node(arrivals[i].node).arrival != arrivals[i].time)
      throw Error(ErrorKind::kSequencing, "arrival time disagrees with graph");
  }
  for (std::size_t i = 0; i < locks.size(); ++i) {
    if (i > 0 && locks[i].time < locks[i - 1].time)
      throw Error(ErrorKind::kSequencing, "lock stream out of order");
    if (g.right_node(locks[i].node).lock_time != locks[i].time)
      throw Error(ErrorKind::kSequencing, "lock time disagrees with graph");
  }
  if (arrivals.size() != g.left().size() || locks.size() != g.right().size())
    throw Error(ErrorKind::kSequencing, "event streams must cover every node once");

  Algorithm1Result result;
  result.trace.right = g.right();
  MatchState st;
  Rational w_prev = 0;
  std::size_t ai = 0, li = 0;
  while (ai < arrivals.size() || li < locks.size()) {
    const Slot t = std::min(ai < arrivals.size() ? arrivals[ai].time : kNeverLocks,
                            li < locks.size() ? locks[li].time : kNeverLocks);
    st.clock = t;
    if (ai < arrivals.size() && arrivals[ai].time == t) {
      TraceEvent ev{t, EventKind::kArrival, {}, 0, 0, 0, {}};
      while (ai < arrivals.size() && arrivals[ai].time == t) {
        st.arrived.insert(arrivals[ai].node);
        ev.nodes.push_back(arrivals[ai].node);
        ++ai;
      }
      Matching temp = max_weight_matching(g, matching_detail::unlocked_left(st),
                                          matching_detail::unlocked_right(g, st));
      st.temp = temp.edges;
      ev.temp_weight = st.temp_weight();
      ev.perm_weight = st.perm_weight();
      ev.delta = ev.temp_weight + ev.perm_weight - w_prev;
      w_prev = ev.temp_weight + ev.perm_weight;
      ev.rho = matching_detail::potentials(g, st);
      result.trace.events.push_back(std::move(ev));
    }
    if (li < locks.size() && locks[li].time == t) {
      TraceEvent ev{t, EventKind::kLock, {}, 0, 0, 0, {}};
      while (li < locks.size() && locks[li].time == t) {
        const NodeId b = locks[li].node;
        ev.nodes.push_back(b);
        auto it = std::find_if(st.temp.begin(), st.temp.end(),
                               [&](const MatchedEdge& e) { return e.right == b; });
        if (it != st.temp.end()) {
          st.perm.push_back(*it);
          st.locked_left.insert(it->left);
          st.temp.erase(it);
        }
        st.locked_right.insert(b);
        ++li;
      }
      ev.temp_weight = st.temp_weight();
      ev.perm_weight = st.perm_weight();
      ev.delta = ev.temp_weight + ev.perm_weight - w_prev;
      w_prev = ev.temp_weight + ev.perm_weight;
      ev.rho = matching_detail::potentials(g, st);
      result.trace.events.push_back(std::move(ev));
    }
  }
  std::sort(st.perm.begin(), st.perm.end(),
            [](const MatchedEdge& x, const MatchedEdge& y) {
              return std::tie(x.left, x.right) < std::tie(y.left, y.right);
            });
  result.perm.edges = st.perm;
  result.perm.weight = st.perm_weight();
  return result;
}

/// Runs Algorithm 1 with event streams taken from the graph's own metadata.
inline Algorithm1Result run_algorithm1(const BipartiteInstance& g) {
  std::vector<ArrivalEvent> arrivals;
  std::vector<LockEvent> locks;
  for (const LeftNode& a : g.left()) arrivals.push_back({a.arrival, a.id});
  for (const RightNode& b : g.right()) locks.push_back({b.lock_time, b.id});
  std::stable_sort(arrivals.begin(), arrivals.end(),
                   [](const ArrivalEvent& x, const ArrivalEvent& y) {
                     return std::tie(x.time, x.node) < std::tie(y.time, y.node);
                   });
  std::stable_sort(locks.begin(), locks.end(),
                   [](const LockEvent& x, const LockEvent& y) {
                     return x.time < y.time;
                   });
  return run_algorithm1(g, arrivals, locks);
}

/// The ρ_t(b) sequence of right node b over every traced event.
inline std::vector<Rational> rho_potential(const RunTrace& trace, NodeId b) {
  if (std::none_of(trace.right.begin(), trace.right.end(),
                   [&](const RightNode& r) { return r.id == b; }))
    throw Error(ErrorKind::kLookup, "unknown right node " + std::to_string(b));
  std::vector<Rational> out;
  for (const TraceEvent& ev : trace.events) out.push_back(ev.rho.at(b));
  return out;
}

/// One JSON object per event, keyed by right-node label.
inline std::string trace_to_jsonl(const RunTrace& trace) {
  std::map<NodeId, std::string> labels;
  for (const RightNode& r : trace.right) labels[r.id] = r.label;
  std::string out;
  for (const TraceEvent& ev : trace.events) {
    Json rho = Json::object();
    for (const auto& [b, v] : ev.rho) rho[labels[b]] = rational_to_json(v);
    Json j{{"clock", ev.clock},
           {"event", to_string(ev.kind)},
           {"nodes", ev.nodes},
           {"temp_weight", rational_to_json(ev.temp_weight)},
           {"perm_weight", rational_to_json(ev.perm_weight)},
           {"rho", rho}};
    out += j.dump() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Binary AQI expansion.

struct MiniSlot {
  Slot slot = 0;
  long server = 0;
  long position = 1;  // i in b_{t,i}
};

struct BinaryExpansion {
  BipartiteInstance graph;
  std::map<NodeId, MiniSlot> mini_slots;  // right node id -> (t, server, i)
};

/// Left nodes are packets (id = packet id, arrival A_p). Right nodes are the
/// mini-slots b_{t,i} per server, i up to the number of packets that have
/// arrived by t (no later packet can use slot t), all locking at t. Edges
/// carry binary_edge_weight; strictly negative weights are left out.
inline BinaryExpansion expand_binary(const Instance& inst) {
  if (!inst.is_binary())
    throw Error(ErrorKind::kPrecondition, "binary expansion requires unit packets");
  BinaryExpansion out;
  std::vector<const Packet*> order;
  for (const Packet& p : inst.packets) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(), [](const Packet* a, const Packet* b) {
    return std::tie(a->arrival, a->id) < std::tie(b->arrival, b->id);
  });
  for (const Packet* p : order)
    out.graph.add_left(p->id, p->arrival, "p" + std::to_string(p->id));
  NodeId next = 0;
  for (Slot t = 0; t <= inst.horizon; ++t) {
    long arrived = 0;
    for (const Packet& p : inst.packets) arrived += p.arrival <= t ? 1 : 0;
    for (long s = 0; s < inst.servers; ++s) {
      for (long i = 1; i <= arrived; ++i) {
        std::string label = "b[" + std::to_string(t) + "," + std::to_string(i) + "]";
        if (inst.servers > 1) label += "s" + std::to_string(s);
        out.graph.add_right(next, t, label);
        out.mini_slots[next] = {t, s, i};
        for (const Packet& p : inst.packets) {
          if (p.arrival > t) continue;
          Rational w = binary_edge_weight(inst, p, t, i, s);
          if (w >= 0) out.graph.set_weight(p.id, next, w);
        }
        ++next;
      }
    }
  }
  return out;
}

/// Converts a matching on the expansion back to a packet allocation.
/// Mini-slot positions within a slot collapse to the slot's bin.
inline Allocation matching_to_allocation(const Instance& inst,
                                         const BinaryExpansion& ex,
                                         const Matching& m) {
  Allocation alloc;
  std::set<PacketId> matched;
  for (const MatchedEdge& e : m.edges) {
    const MiniSlot& ms = ex.mini_slots.at(e.right);
    alloc.add({e.left, 1}, Bin::regular(ms.slot, ms.server));
    matched.insert(e.left);
  }
  for (const Packet& p : inst.packets)
    if (!matched.count(p.id)) alloc.add({p.id, 1}, Bin::discard_bin());
  return alloc;
}

}  // namespace aqi
