/*
 Copyright 2026 The ilqra Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "ilqra/objective.hpp"
#include "ilqra/random.hpp"
#include "ilqra/verification.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

namespace ilqra {
namespace {

using Seq = std::vector<double>;

Seq random_seq(Rng& rng, int n) {
  Seq s(n);
  for (auto& v : s) v = rng.uniform(-1, 1);
  return s;
}

// The critical time that determines J_t: the smallest critical time >= t.
double next_critical_value(const Seq& l, const Seq& g, const CriticalSet& set,
                           int t) {
  for (const auto& c : set)
    if (c.time >= t) return c.kind == MarginKind::kTarget ? l[c.time] : g[c.time];
  ADD_FAILURE() << "no critical time at or after " << t;
  return 0.0;
}

TEST(CostToGo, ReachOnlyIsMinimumOfTarget) {
  const Seq l = {3, 1, -2, 0.5, 4};
  const Seq g(l.size(), -1e6);
  const CostToGo J = cost_to_go(l, g);
  EXPECT_DOUBLE_EQ(J.initial(), -2.0);
}

TEST(CostToGo, ConstantTarget) {
  const Seq l(7, 0.25), g(7, -1e6);
  for (double v : cost_to_go(l, g).values) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(CostToGo, MatchesBruteForceOnRandomSequences) {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const Seq l = random_seq(rng, 21), g = random_seq(rng, 21);
    const CostToGo J = cost_to_go(l, g);
    for (int s = 0; s <= 20; ++s) {
      EXPECT_NEAR(J.values[s], oracle::naive_reach_avoid(l, g, s), 1e-12);
      EXPECT_NEAR(J.values[s], brute_force_objective(l, g, s), 1e-12);
    }
  }
}

TEST(CostToGo, RecursionHoldsPointwise) {
  Rng rng(8);
  const Seq l = random_seq(rng, 30), g = random_seq(rng, 30);
  const CostToGo J = cost_to_go(l, g);
  EXPECT_EQ(J.values[29], std::max(g[29], l[29]));
  for (int t = 0; t < 29; ++t)
    EXPECT_EQ(J.values[t], std::max(g[t], std::min(J.values[t + 1], l[t])));
}

TEST(CostToGo, RejectsMismatchedLengths) {
  EXPECT_THROW(cost_to_go(Seq{1, 2}, Seq{1}), std::invalid_argument);
}

TEST(PinchPoint, SingleTargetEntry) {
  Seq l(11), g(11, -1.0);
  for (int t = 0; t <= 10; ++t) l[t] = std::abs(t - 5) - 0.5;
  const CriticalPoint p = pinch_point(l, g);
  EXPECT_EQ(p.time, 5);
  EXPECT_EQ(p.kind, MarginKind::kTarget);
}

TEST(PinchPoint, DominatingFailure) {
  Seq l(8, 1.0), g(8, -1.0);
  l[6] = -2.0;
  g[2] = 0.7;
  const CostToGo J = cost_to_go(l, g);
  EXPECT_DOUBLE_EQ(J.initial(), 0.7);
  const CriticalPoint p = pinch_point(l, g);
  EXPECT_EQ(p.time, 2);
  EXPECT_EQ(p.kind, MarginKind::kFailure);
}

TEST(PinchPoint, SingleStepHorizon) {
  EXPECT_EQ(pinch_point(Seq{0.3}, Seq{-0.1}), (CriticalPoint{0, MarginKind::kTarget}));
  EXPECT_EQ(pinch_point(Seq{-0.3}, Seq{0.1}), (CriticalPoint{0, MarginKind::kFailure}));
  // Tie goes to failure.
  EXPECT_EQ(pinch_point(Seq{0.2}, Seq{0.2}), (CriticalPoint{0, MarginKind::kFailure}));
}

TEST(CriticalSet, DecreasingTargetInsideFromStepFive) {
  const int T = 12;
  Seq l(T + 1), g(T + 1, -5.0);
  for (int t = 0; t <= T; ++t) l[t] = t < 5 ? 1.0 : -0.1 * t;
  const CriticalSet set = critical_set(l, g);
  // Each step from 5 on lowers l, so only t = T fires inside; before 5 the
  // assignment never fires because J_{t+1} < l_t.
  ASSERT_EQ(set.size(), 1u);
  EXPECT_EQ(set[0], (CriticalPoint{T, MarginKind::kTarget}));
  // Increasing inside the target instead: every step from 5 to T fires.
  for (int t = 5; t <= T; ++t) l[t] = -2.0 + 0.1 * t;
  const CriticalSet rising = critical_set(l, g);
  ASSERT_EQ(rising.size(), static_cast<size_t>(T - 5 + 1));
  for (size_t k = 0; k < rising.size(); ++k)
    EXPECT_EQ(rising[k], (CriticalPoint{5 + static_cast<int>(k), MarginKind::kTarget}));
}

TEST(CriticalSet, StrictlyIncreasingTimesAndNextCriticalValue) {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const Seq l = random_seq(rng, 31), g = random_seq(rng, 31);
    const CriticalSet set = critical_set(l, g);
    ASSERT_FALSE(set.empty());
    EXPECT_EQ(set.back().time, 30);
    for (size_t k = 1; k < set.size(); ++k) EXPECT_LT(set[k - 1].time, set[k].time);
    const CostToGo J = cost_to_go(l, g);
    for (int t = 0; t <= 30; ++t)
      EXPECT_EQ(J.values[t], next_critical_value(l, g, set, t));
    EXPECT_EQ(pinch_point(l, g), set.front());
  }
}

TEST(CriticalSet, ReachOnlyUniqueMinimum) {
  Seq l = {2, 1.5, 0.3, -1.0, 0.4, 0.8}, g(6, -1e6);
  const CriticalSet set = critical_set(l, g);
  const CostToGo J = cost_to_go(l, g);
  for (int t = 0; t <= 5; ++t) EXPECT_EQ(J.values[t], next_critical_value(l, g, set, t));
  EXPECT_EQ(pinch_point(l, g), (CriticalPoint{3, MarginKind::kTarget}));
}

TEST(BruteForce, TrivialCases) {
  EXPECT_DOUBLE_EQ(brute_force_objective(Seq{0.1, 0.4}, Seq{-1, 0.2}, 1), 0.4);
  EXPECT_DOUBLE_EQ(brute_force_objective(Seq(5, 0.0), Seq(5, -1.0), 0), 0.0);
}

}  // namespace
}  // namespace ilqra
