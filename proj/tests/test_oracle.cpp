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


#include <functional>

#include <gtest/gtest.h>

#include "aqi/aqi.hpp"

namespace aqi {
namespace {

Instance single() {
  Instance inst;
  inst.horizon = 2;
  inst.energy = {CostFamily::linear(1)};
  Packet p;
  p.distortion = CostFamily::tabulated({0, 5});
  p.delay_cost = CostFamily::linear(1);
  inst.packets.push_back(p);
  return inst;
}

// Plain enumeration of every allocation, no ordering constraint, no
// pruning: the reference the branch and bound must match.
Rational enumerate_all(const Instance& inst) {
  const auto pool = resource_order(inst);
  Allocation cur;
  Rational best = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == pool.size()) {
      best = std::max(best, evaluate_z(inst, cur).total);
      return;
    }
    const Packet& p = inst.packet(pool[i].packet);
    std::vector<Bin> bins = regular_bins(inst, p.arrival);
    bins.push_back(Bin::discard_bin());
    for (const Bin& b : bins) {
      cur.entries[pool[i]] = b;
      rec(i + 1);
    }
    cur.entries.erase(pool[i]);
  };
  rec(0);
  return best;
}

TEST(Bruteforce, SinglePacket) {
  const OracleResult r = offline_opt_bruteforce(single());
  EXPECT_EQ(r.valuation.total, Rational(4));
  EXPECT_EQ(r.allocation.entries.at({0, 1}), Bin::regular(0));
}

TEST(Bruteforce, EmptyInstance) {
  Instance inst;
  inst.horizon = 3;
  const OracleResult r = offline_opt_bruteforce(inst);
  EXPECT_EQ(r.valuation.total, Rational(0));
  EXPECT_EQ(r.allocation.size(), 0u);
}

TEST(Bruteforce, BudgetExceededIsExplicit) {
  GenParams gp;
  gp.seed = 3;
  gp.packets = 5;
  gp.max_k = 3;
  gp.horizon = 5;
  try {
    offline_opt_bruteforce(generate(gp), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBudget);
    EXPECT_NE(std::string(e.what()).find("instance too large for exact oracle"),
              std::string::npos);
  }
}

TEST(Bruteforce, ThreeBinaryPacketsMatchTheMatchingOracle) {
  Instance inst;
  inst.horizon = 2;
  inst.energy = {CostFamily::power(1, 2)};
  const long values[] = {6, 8, 5};
  for (PacketId id = 0; id < 3; ++id) {
    Packet p;
    p.id = id;
    p.arrival = id % 2;
    p.distortion = CostFamily::tabulated({0, values[id]});
    p.delay_cost = CostFamily::linear(1);
    inst.packets.push_back(p);
  }
  EXPECT_EQ(offline_opt_bruteforce(inst).valuation.total,
            offline_opt_binary_matching(inst).weight);
}

TEST(Bruteforce, MatchesUnprunedEnumeration) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GenParams gp;
    gp.seed = seed;
    gp.packets = 3;
    gp.max_k = 2;
    gp.horizon = 2;
    gp.servers = 1 + static_cast<long>(seed % 2);
    const Instance inst = generate(gp);
    const OracleResult r = offline_opt_bruteforce(inst);
    EXPECT_EQ(r.valuation.total, enumerate_all(inst)) << "seed " << seed;
    EXPECT_TRUE(is_index_ordered(r.allocation));
  }
}

TEST(Bruteforce, TiesResolveToLexSmallestAllocation) {
  Instance inst;
  inst.horizon = 3;
  inst.energy = {CostFamily::zero()};
  Packet p;
  p.distortion = CostFamily::tabulated({0, 5});
  inst.packets.push_back(p);  // every slot is worth 5
  EXPECT_EQ(offline_opt_bruteforce(inst).allocation.entries.at({0, 1}), Bin::regular(0));
}

TEST(BinaryMatchingOracle, OnePacketOneSlot) {
  Instance inst;
  inst.horizon = 0;
  inst.energy = {CostFamily::linear(7)};
  Packet p;
  p.distortion = CostFamily::tabulated({0, 5});
  inst.packets.push_back(p);
  EXPECT_EQ(offline_opt_binary_matching(inst).weight, Rational(0));  // max(5-7, 0)
  inst.energy = {CostFamily::linear(2)};
  EXPECT_EQ(offline_opt_binary_matching(inst).weight, Rational(3));
}

TEST(BinaryMatchingOracle, AdversarialGadget) {
  GenParams gp;
  gp.mode = GenMode::kAdversarialLock;
  gp.packets = 3;
  gp.horizon = 1;
  EXPECT_EQ(offline_opt_binary_matching(generate(gp)).weight, Rational(200));
}

TEST(BinaryMatchingOracle, RejectsNonBinary) {
  GenParams gp;
  gp.seed = 1;
  gp.max_k = 3;
  gp.packets = 4;
  Instance inst = generate(gp);
  inst.packets[0].subpackets = 2;
  inst.packets[0].distortion = CostFamily::tabulated({0, 2, 3});
  EXPECT_THROW(offline_opt_binary_matching(inst), Error);
}

class CrossOracle : public ::testing::TestWithParam<int> {};

TEST_P(CrossOracle, RandomFivePacketBinaryInstances) {
  GenParams gp;
  gp.seed = static_cast<std::uint64_t>(GetParam());
  gp.packets = 5;
  gp.binary = true;
  gp.horizon = 4;
  const Instance inst = generate(gp);
  EXPECT_EQ(offline_opt_bruteforce(inst).valuation.total,
            offline_opt_binary_matching(inst).weight);
}

INSTANTIATE_TEST_SUITE_P(Seeds, CrossOracle, ::testing::Range(0, 100));

TEST(CompetitiveRatio, Cases) {
  EXPECT_EQ(*competitive_ratio(4, 4).ratio, Rational(1));
  const RatioReport probe = competitive_ratio(101, 200);
  EXPECT_EQ(*probe.ratio, make_rational(101, 200));
  EXPECT_FALSE(probe.violation);
  const RatioReport undefined = competitive_ratio(0, 0);
  EXPECT_FALSE(undefined.ratio.has_value());
  EXPECT_NE(undefined.text.find("undefined (OPT=0)"), std::string::npos);
  EXPECT_TRUE(competitive_ratio(1, 3).violation);
  EXPECT_TRUE(competitive_ratio(0, -1).degenerate);
}

TEST(Budget, EnvironmentOverridesDefault) {
  ::setenv("AQI_BUDGET", "1234", 1);
  EXPECT_EQ(default_budget(), 1234);
  ::setenv("AQI_BUDGET", "nope", 1);
  EXPECT_THROW(default_budget(), Error);
  ::unsetenv("AQI_BUDGET");
  EXPECT_EQ(default_budget(), kDefaultBudget);
}

}  // namespace
}  // namespace aqi
