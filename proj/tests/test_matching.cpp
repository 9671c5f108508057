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


#include <gtest/gtest.h>

#include "aqi/aqi.hpp"

namespace aqi {
namespace {

BipartiteInstance two_by_two() {
  BipartiteInstance g;
  g.add_left(1, 0);
  g.add_left(2, 0);
  g.add_right(1, 1);
  g.add_right(2, 1);
  g.set_weight(1, 1, 3);
  g.set_weight(1, 2, 5);
  g.set_weight(2, 1, 4);
  g.set_weight(2, 2, 1);
  return g;
}

// b1 locks at 1, b2 at 2; a1 arrives at 0, a2 at 2 (after b1 locked).
BipartiteInstance two_node_scenario() {
  BipartiteInstance g;
  g.add_left(1, 0);
  g.add_left(2, 2);
  g.add_right(1, 1);
  g.add_right(2, 2);
  g.set_weight(1, 1, 5);
  g.set_weight(1, 2, 3);
  g.set_weight(2, 1, 6);
  g.set_weight(2, 2, 6);
  return g;
}

std::vector<Rational> rs(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.push_back(Rational(x));
  return out;
}

TEST(MaxWeightMatching, OneByOne) {
  BipartiteInstance g;
  g.add_left(0, 0);
  g.add_right(0, 0);
  g.set_weight(0, 0, 4);
  const Matching m = max_weight_matching(g);
  ASSERT_EQ(m.edges.size(), 1u);
  EXPECT_EQ(m.weight, Rational(4));
}

TEST(MaxWeightMatching, TwoByTwo) {
  const Matching m = max_weight_matching(two_by_two());
  EXPECT_EQ(m.weight, Rational(9));
  ASSERT_EQ(m.edges.size(), 2u);
  EXPECT_EQ(m.edges[0], (MatchedEdge{1, 2, 5}));
  EXPECT_EQ(m.edges[1], (MatchedEdge{2, 1, 4}));
}

TEST(MaxWeightMatching, ForcedEdge) {
  const Matching m = max_weight_matching(two_by_two(), {{1, 1}});
  EXPECT_EQ(m.weight, Rational(4));
  EXPECT_EQ(m.edges[0], (MatchedEdge{1, 1, 3}));
  EXPECT_EQ(m.edges[1], (MatchedEdge{2, 2, 1}));
}

TEST(MaxWeightMatching, ForcedEdgesSharingANodeAreInfeasible) {
  try {
    max_weight_matching(two_by_two(), {{1, 1}, {1, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
  EXPECT_THROW(max_weight_matching(two_by_two(), {{1, 1}, {2, 1}}), Error);
}

TEST(MaxWeightMatching, LeavesNodesUnmatchedWhenNothingIsGained) {
  BipartiteInstance g;
  g.add_left(0, 0);
  g.add_left(1, 0);
  g.add_right(0, 0);
  g.set_weight(0, 0, 2);
  const Matching m = max_weight_matching(g);
  EXPECT_EQ(m.edges.size(), 1u);
  EXPECT_EQ(m.weight, Rational(2));
}

TEST(MaxWeightMatching, RejectsNegativeWeights) {
  BipartiteInstance g;
  g.add_left(0, 0);
  g.add_right(0, 0);
  EXPECT_THROW(g.set_weight(0, 0, -1), Error);
}

// Exhaustive check against all partial matchings on small random graphs.
TEST(MaxWeightMatching, AgreesWithEnumeration) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    BipartiteInstance g;
    const long nl = rng.uniform(1, 4), nr = rng.uniform(1, 4);
    for (long a = 0; a < nl; ++a) g.add_left(a, 0);
    for (long b = 0; b < nr; ++b) g.add_right(b, 0);
    for (long a = 0; a < nl; ++a)
      for (long b = 0; b < nr; ++b)
        if (rng.chance(2, 3)) g.set_weight(a, b, make_rational(rng.uniform(0, 20), rng.uniform(1, 3)));
    Rational best = 0;
    std::vector<bool> used(static_cast<std::size_t>(nr), false);
    std::function<void(long, Rational)> rec = [&](long a, Rational acc) {
      if (a == nl) {
        best = std::max(best, acc);
        return;
      }
      rec(a + 1, acc);
      for (long b = 0; b < nr; ++b) {
        auto w = g.weight(a, b);
        if (!w || used[static_cast<std::size_t>(b)]) continue;
        used[static_cast<std::size_t>(b)] = true;
        rec(a + 1, acc + *w);
        used[static_cast<std::size_t>(b)] = false;
      }
    };
    rec(0, 0);
    EXPECT_EQ(max_weight_matching(g).weight, best) << "trial " << trial;
  }
}

TEST(Algorithm1, SingleEdge) {
  BipartiteInstance g;
  g.add_left(0, 0);
  g.add_right(0, 1);
  g.set_weight(0, 0, 4);
  EXPECT_EQ(run_algorithm1(g).perm.weight, Rational(4));
}

TEST(Algorithm1, TwoNodeScenario) {
  const BipartiteInstance g = two_node_scenario();
  const Algorithm1Result r = run_algorithm1(g);
  EXPECT_EQ(r.perm.weight, Rational(11));
  EXPECT_EQ(offline_max_weight(g).weight, Rational(11));
  ASSERT_EQ(r.perm.edges.size(), 2u);
  EXPECT_EQ(r.perm.edges[0], (MatchedEdge{1, 1, 5}));
  EXPECT_EQ(r.perm.edges[1], (MatchedEdge{2, 2, 6}));
}

// After a1 arrives, W = 5 with b1 and W = 3 without it (a1 -> b2), so
// ρ_0(b1) = 2; from the lock on it is ν_{b1} = 5.
TEST(RhoPotential, TwoNodeScenario) {
  const Algorithm1Result r = run_algorithm1(two_node_scenario());
  EXPECT_EQ(rho_potential(r.trace, 1), rs({2, 5, 5, 5}));
  EXPECT_EQ(rho_potential(r.trace, 2), rs({0, 0, 6, 6}));
}

TEST(RhoPotential, NeverCompetedForIsAllZero) {
  BipartiteInstance g = two_node_scenario();
  g.add_right(3, 2);
  const Algorithm1Result r = run_algorithm1(g);
  for (const Rational& v : rho_potential(r.trace, 3)) EXPECT_EQ(v, Rational(0));
}

TEST(RhoPotential, LockedUnmatchedEndsAtZero) {
  BipartiteInstance g;
  g.add_left(0, 1);
  g.add_right(0, 0);
  g.add_right(1, 1);
  g.set_weight(0, 1, 2);
  const Algorithm1Result r = run_algorithm1(g);
  EXPECT_EQ(rho_potential(r.trace, 0).back(), Rational(0));
  EXPECT_THROW(rho_potential(r.trace, 9), Error);
}

// A cheap bait c pulls b1 away from a1 before b1 locks; a1 then has to
// fight the late a2 for b2. Online gets w + eps, offline 2w.
TEST(Algorithm1, AdversarialProbe) {
  const Rational w = 100, eps = 1;
  BipartiteInstance g;
  g.add_left(0, 0);  // c
  g.add_left(1, 0);  // a1
  g.add_left(2, 1);  // a2
  g.add_right(1, 0);
  g.add_right(2, 1);
  g.set_weight(0, 1, eps);
  g.set_weight(1, 1, w);
  g.set_weight(1, 2, w);
  g.set_weight(2, 2, w);
  const Algorithm1Result r = run_algorithm1(g);
  EXPECT_EQ(r.perm.weight, w + eps);
  EXPECT_EQ(offline_max_weight(g).weight, 2 * w);
  const RatioReport ratio = competitive_ratio(r.perm.weight, 2 * w);
  EXPECT_EQ(*ratio.ratio, make_rational(101, 200));
  EXPECT_FALSE(ratio.violation);
}

TEST(Algorithm1, OutOfOrderStreamIsSequencingError) {
  const BipartiteInstance g = two_node_scenario();
  try {
    run_algorithm1(g, {{2, 2}, {0, 1}}, {{1, 1}, {2, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSequencing);
  }
  EXPECT_THROW(run_algorithm1(g, {{0, 1}, {2, 2}}, {{2, 2}, {1, 1}}), Error);
}

TEST(Algorithm1, PermAndTempStayDisjointMatchings) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GenParams gp;
    gp.seed = seed;
    gp.packets = 5;
    gp.binary = true;
    gp.horizon = 4;
    const BinaryExpansion ex = expand_binary(generate(gp));
    const Algorithm1Result r = run_algorithm1(ex.graph);
    std::set<NodeId> l, rr;
    for (const MatchedEdge& e : r.perm.edges) {
      EXPECT_TRUE(l.insert(e.left).second);
      EXPECT_TRUE(rr.insert(e.right).second);
    }
    for (const TraceEvent& ev : r.trace.events) EXPECT_GE(ev.temp_weight, 0);
    EXPECT_GE(2 * r.perm.weight, offline_max_weight(ex.graph).weight);
  }
}

TEST(ExpandBinary, OnePacketThreeSlots) {
  Instance inst;
  inst.horizon = 2;
  inst.energy = {CostFamily::tabulated({0, 1, 3})};
  Packet p;
  p.id = 0;
  p.distortion = CostFamily::tabulated({0, 5});
  p.delay_cost = CostFamily::linear(2);
  inst.packets.push_back(p);
  const BinaryExpansion ex = expand_binary(inst);
  ASSERT_EQ(ex.graph.right().size(), 3u);  // b_{0,1}, b_{1,1}, b_{2,1}
  // 5 - 2t - 1: 4, 2, 0; all non-negative.
  EXPECT_EQ(ex.graph.weight(0, 0), std::optional<Rational>(4));
  EXPECT_EQ(ex.graph.weight(0, 1), std::optional<Rational>(2));
  EXPECT_EQ(ex.graph.weight(0, 2), std::optional<Rational>(0));
  EXPECT_EQ(ex.graph.right()[0].label, "b[0,1]");
}

TEST(ExpandBinary, UnprofitablePacketIsIsolated) {
  Instance inst;
  inst.horizon = 1;
  inst.energy = {CostFamily::linear(10)};
  Packet p;
  p.id = 0;
  p.distortion = CostFamily::tabulated({0, 5});
  inst.packets.push_back(p);
  const BinaryExpansion ex = expand_binary(inst);
  EXPECT_TRUE(ex.graph.weights().empty());
  EXPECT_EQ(run_algorithm1(ex.graph).perm.weight, Rational(0));
}

TEST(ExpandBinary, ThreeIdenticalPacketsGetEnergyIncrements) {
  Instance inst;
  inst.horizon = 0;
  inst.energy = {CostFamily::tabulated({0, 1, 3, 6})};
  for (PacketId id = 0; id < 3; ++id) {
    Packet p;
    p.id = id;
    p.distortion = CostFamily::tabulated({0, 10});
    inst.packets.push_back(p);
  }
  const BinaryExpansion ex = expand_binary(inst);
  ASSERT_EQ(ex.graph.right().size(), 3u);
  EXPECT_EQ(ex.graph.weight(0, 0), std::optional<Rational>(9));  // g(1)
  EXPECT_EQ(ex.graph.weight(0, 1), std::optional<Rational>(8));  // g(2)-g(1)
  EXPECT_EQ(ex.graph.weight(0, 2), std::optional<Rational>(7));  // g(3)-g(2)
}

TEST(ExpandBinary, RejectsNonBinary) {
  Instance inst;
  Packet p;
  p.subpackets = 2;
  p.distortion = CostFamily::tabulated({0, 2, 3});
  inst.packets.push_back(p);
  EXPECT_THROW(expand_binary(inst), Error);
}

TEST(Trace, JsonLinesHaveOneRecordPerEvent) {
  const Algorithm1Result r = run_algorithm1(two_node_scenario());
  const std::string text = trace_to_jsonl(r.trace);
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const Json j = Json::parse(line);
    EXPECT_TRUE(j.contains("clock") && j.contains("event") && j.contains("rho"));
    ++n;
  }
  EXPECT_EQ(n, 4);
}

}  // namespace
}  // namespace aqi
