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

// Reference configuration: one source, e1..e3 at times 0, 1, t_3. e1 sits at
// slot 2, e2 at slot t + 2 = 4, so Δ₂ = 4 - t_3.
class AoiReference : public ::testing::TestWithParam<Slot> {};

TEST_P(AoiReference, EdgeIncrements) {
  const Slot t3 = GetParam();
  const Rational d = 10;
  const AoiModel model({{{0, 1, t3}, d}}, 8);
  const AoiSchedule s{{{0, 0}, 2}, {{0, 1}, 4}};
  const Rational delta2(4 - t3);
  const EventRef e3{0, 2};
  EXPECT_EQ(model.rho(e3, 5, s), Rational(d - (delta2 + Rational(1, 2))));
  EXPECT_EQ(model.rho(e3, 6, s), Rational(d - (2 * delta2 + 2)));
  EXPECT_EQ(model.rho(e3, 3, s), Rational(0));
  EXPECT_EQ(model.rho(e3, 4, s), Rational(0));
}

INSTANTIATE_TEST_SUITE_P(Delta, AoiReference, ::testing::Values(Slot{2}, Slot{3}));

TEST(AoiModel, OlderEventAfterNewerIsWorthless) {
  const AoiModel model({{{0, 2}, 5}}, 6);
  const AoiSchedule s{{{0, 1}, 3}};
  for (Slot k = 0; k <= 3; ++k) EXPECT_EQ(model.rho({0, 0}, k, s), Rational(0));
}

TEST(AoiModel, FirstEventPaysTriangleOnly) {
  const AoiModel model({{{1}, 4}}, 4);
  EXPECT_EQ(model.rho({0, 0}, 1, {}), Rational(4));
  EXPECT_EQ(model.rho({0, 0}, 2, {}), Rational(7, 2));
  EXPECT_EQ(model.rho({0, 0}, 3, {}), Rational(2));
}

TEST(AoiModel, OtherSourcesDoNotInteract) {
  const AoiModel model({{{0}, 3}, {{0}, 3}}, 3);
  const AoiSchedule s{{{1, 0}, 2}};
  EXPECT_EQ(model.rho({0, 0}, 1, s), Rational(5, 2));
}

TEST(AoiModel, Errors) {
  EXPECT_THROW(AoiModel({{{0, 3, 2}, 1}}, 5), Error);
  try {
    AoiModel({{{1, 1}, 1}}, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    EXPECT_NE(std::string(e.what()).find("unordered event list"), std::string::npos);
  }
  EXPECT_THROW(AoiModel({{{6}, 1}}, 5), Error);
  const AoiModel model({{{2}, 1}}, 5);
  EXPECT_THROW(model.rho({0, 0}, 1, {}), Error);
  EXPECT_THROW(model.rho({0, 3}, 3, {}), Error);
}

TEST(AoiModel, ToInstanceIsValidAndBinary) {
  const AoiModel model({{{0, 1, 3}, 10}, {{2}, 4}}, 8);
  const Instance inst = model.to_instance();
  EXPECT_NO_THROW(require_valid(inst));
  EXPECT_TRUE(inst.is_binary());
  EXPECT_EQ(inst.packets.size(), 4u);
}

std::size_t sent(const Allocation& a) {
  std::size_t n = 0;
  for (const auto& [r, b] : a.entries) n += b.discard ? 0 : 1;
  return n;
}

std::vector<CostFamily> squares(long m) {
  return std::vector<CostFamily>(static_cast<std::size_t>(m), CostFamily::power(1, 2));
}

TEST(SpeedScaling, GreedySplitsAcrossServers) {
  const Instance inst = speed_scaling({{2, 0}}, 2, squares(2), 1);
  const GreedyResult g = run_algorithm2(inst);
  ASSERT_EQ(g.steps.size(), 2u);
  EXPECT_EQ(g.steps[0].chosen, Bin::regular(0, 0));
  EXPECT_EQ(g.steps[1].chosen, Bin::regular(0, 1));
  // unit value 2, no delay, energy 1 + 1 instead of 1 + 3
  EXPECT_EQ(g.valuation.total, Rational(4 - 2));
  EXPECT_EQ(offline_opt_bruteforce(inst).valuation.total, g.valuation.total);
}

TEST(SpeedScaling, SingleServerMatchesDirectConstruction) {
  const std::vector<Job> jobs{{2, 0}, {1, 1}};
  const Instance ss = speed_scaling(jobs, 1, squares(1), 2);
  Instance direct;
  direct.horizon = 2;
  direct.energy = {CostFamily::power(1, 2)};
  for (PacketId id = 0; id < 2; ++id) {
    Packet p;
    p.id = id;
    p.arrival = jobs[id].arrival;
    p.subpackets = jobs[id].size;
    p.distortion = CostFamily::linear(3);
    p.delay_cost = CostFamily::linear(1);
    direct.packets.push_back(p);
  }
  EXPECT_EQ(run_algorithm2(ss).valuation.total, run_algorithm2(direct).valuation.total);
  EXPECT_EQ(offline_opt_bruteforce(ss).valuation.total,
            offline_opt_bruteforce(direct).valuation.total);
}

TEST(SpeedScaling, UnitJobsOnOneServerMatchBinaryOracle) {
  const Instance inst = speed_scaling({{1, 0}, {1, 0}, {1, 1}}, 1, squares(1), 2);
  EXPECT_TRUE(inst.is_binary());
  EXPECT_EQ(offline_opt_bruteforce(inst).valuation.total,
            offline_opt_binary_matching(inst).weight);
}

TEST(SpeedScaling, MandatoryWeightsForbidDiscards) {
  const std::vector<Job> jobs{{2, 0}, {1, 0}};
  const std::vector<CostFamily> steep{CostFamily::power(10, 2)};
  const OracleResult plain = offline_opt_bruteforce(speed_scaling(jobs, 1, steep, 1));
  EXPECT_LT(sent(plain.allocation), 3u);

  SpeedScalingOptions opt;
  opt.mandatory = true;
  const Instance inst = speed_scaling(jobs, 1, steep, 1, opt);
  const OracleResult forced = offline_opt_bruteforce(inst);
  EXPECT_EQ(sent(forced.allocation), 3u);
}

TEST(SpeedScaling, Errors) {
  EXPECT_THROW(speed_scaling({{1, 0}}, 0, {}, 1), Error);
  const std::vector<CostFamily> concave{CostFamily::tabulated({0, 3, 4})};
  try {
    speed_scaling({{1, 0}}, 1, concave, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
  }
}

TEST(RemoteSampling, SingleSourceFidelity) {
  RemoteSamplingParams params;
  params.sources = 1;
  params.arrival_num = 1;
  params.arrival_den = 1;
  const Instance inst = remote_sampling_family(params, 3);
  ASSERT_EQ(inst.packets.size(), static_cast<std::size_t>(params.horizon + 1));
  const Packet& p = inst.packets[0];
  EXPECT_EQ(p.subpackets, 3);
  EXPECT_EQ(p.distortion.delta(0), Rational(7));
  EXPECT_EQ(p.distortion.delta(1), Rational(3));
  EXPECT_EQ(p.distortion.delta(2), Rational(1));
}

TEST(RemoteSampling, SameSeedSameBytes) {
  const RemoteSamplingParams params;
  for (std::uint64_t seed : {0u, 9u, 12345u})
    EXPECT_EQ(instance_to_json(remote_sampling_family(params, seed)).dump(),
              instance_to_json(remote_sampling_family(params, seed)).dump());
}

TEST(RemoteSampling, BatchIsValid) {
  RemoteSamplingParams params;
  params.sources = 3;
  params.horizon = 6;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    EXPECT_NO_THROW(require_valid(remote_sampling_family(params, seed))) << seed;
}

TEST(RemoteSampling, BadFidelityTable) {
  RemoteSamplingParams params;
  params.fidelity = {0};
  EXPECT_THROW(remote_sampling_family(params, 0), Error);
}

}  // namespace
}  // namespace aqi
