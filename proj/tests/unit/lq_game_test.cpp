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
#include "ilqra/lq_game.hpp"
#include "ilqra/random.hpp"

#include "lq_util.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace ilqra {
namespace {

using testing::max_abs_diff;
using testing::slice;

Mat scalar(double v) { return Mat::Constant(1, 1, v); }
Vec scalar_v(double v) { return Vec::Constant(1, v); }

TEST(RiccatiStep, CostlessGameHasZeroGains) {
  const int n = 3;
  const PerPlayer<ValuePair> next(2, {Mat::Zero(n, n), Vec::Zero(n)});
  Rng rng(1);
  const RiccatiStep s = riccati_step(
      rng.matrix(n, n), {rng.matrix(n, 1), rng.matrix(n, 2)}, next,
      {Mat::Zero(n, n), Mat::Zero(n, n)}, {Vec::Zero(n), Vec::Zero(n)},
      {Mat::Identity(1, 1), Mat::Identity(2, 2)}, {Vec::Zero(1), Vec::Zero(2)});
  EXPECT_TRUE(s.K[0].isZero());
  EXPECT_TRUE(s.K[1].isZero());
  EXPECT_TRUE(s.k[0].isZero());
  EXPECT_TRUE(s.k[1].isZero());
}

TEST(RiccatiStep, ScalarLqr) {
  const RiccatiStep s =
      riccati_step(scalar(1), {scalar(1)}, {{scalar(1), scalar_v(0)}},
                   {scalar(0)}, {scalar_v(0)}, {scalar(1)}, {scalar_v(0)});
  EXPECT_DOUBLE_EQ(s.K[0](0, 0), 0.5);
}

TEST(RiccatiStep, SingularSystemThrows) {
  EXPECT_THROW(riccati_step(scalar(1), {scalar(1)}, {{scalar(0), scalar_v(0)}},
                            {scalar(0)}, {scalar_v(0)}, {scalar(0)}, {scalar_v(0)}, 4),
               SingularGameError);
}

TEST(SolveStandard, SinglePlayerMatchesLqrOracle) {
  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 6, m = 1 + trial % 3, T = 5 + 2 * trial;
    const LqApprox lq = oracle::random_game(rng, T, n, {m});
    const LqSolution sol = solve_standard(lq);
    const oracle::Lqr ref = oracle::solve_lqr(
        lq.A, lq.B[0], std::vector<Vec>(T, Vec::Zero(n)), lq.Q[0], lq.q[0],
        lq.R[0], lq.r[0]);
    for (int t = 0; t < T; ++t) {
      EXPECT_LT(max_abs_diff(sol.K[0][t], ref.K[t]), 1e-9);
      EXPECT_LT(max_abs_diff(sol.k[0][t], ref.k[t]), 1e-9);
    }
    EXPECT_LT(max_abs_diff(sol.V[0][0].Z, ref.P[0]), 1e-7);
  }
}

TEST(SolveStandard, TwoPlayerGainsAreBestResponses) {
  Rng rng(321);
  for (int trial = 0; trial < 10; ++trial) {
    const LqApprox lq = oracle::random_game(rng, 12, 4, {1, 2});
    const LqSolution sol = solve_standard(lq);
    for (int i = 0; i < 2; ++i) {
      const oracle::Lqr br = oracle::best_response(lq, sol.K, sol.k, i);
      for (int t = 0; t < 12; ++t) {
        EXPECT_LT(max_abs_diff(br.K[t], sol.K[i][t]), 1e-8);
        EXPECT_LT(max_abs_diff(br.k[t], sol.k[i][t]), 1e-8);
      }
    }
  }
}

TEST(SolveStandard, BlockDiagonalGameDecouples) {
  Rng rng(5);
  const int T = 10;
  const LqApprox a = oracle::random_game(rng, T, 2, {1});
  const LqApprox b = oracle::random_game(rng, T, 3, {2});
  LqApprox lq = LqApprox::zeros(T, 5, {1, 2});
  for (int t = 0; t < T; ++t) {
    lq.A[t].topLeftCorner(2, 2) = a.A[t];
    lq.A[t].bottomRightCorner(3, 3) = b.A[t];
    lq.B[0][t].topRows(2) = a.B[0][t];
    lq.B[1][t].bottomRows(3) = b.B[0][t];
    lq.R[0][t] = a.R[0][t];
    lq.r[0][t] = a.r[0][t];
    lq.R[1][t] = b.R[0][t];
    lq.r[1][t] = b.r[0][t];
  }
  for (int t = 0; t <= T; ++t) {
    lq.Q[0][t].topLeftCorner(2, 2) = a.Q[0][t];
    lq.q[0][t].head(2) = a.q[0][t];
    lq.Q[1][t].bottomRightCorner(3, 3) = b.Q[0][t];
    lq.q[1][t].tail(3) = b.q[0][t];
  }
  const LqSolution joint = solve_standard(lq);
  const LqSolution sa = solve_standard(a), sb = solve_standard(b);
  for (int t = 0; t < T; ++t) {
    EXPECT_LT(max_abs_diff(joint.K[0][t].leftCols(2), sa.K[0][t]), 1e-10);
    EXPECT_LT(joint.K[0][t].rightCols(3).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(max_abs_diff(joint.K[1][t].rightCols(3), sb.K[0][t]), 1e-10);
    EXPECT_LT(max_abs_diff(joint.k[1][t], sb.k[0][t]), 1e-10);
  }
}

TEST(SolveStandard, OneStepGameClosedForm) {
  Rng rng(17);
  const LqApprox lq = oracle::random_game(rng, 1, 3, {1, 2});
  const LqSolution sol = solve_standard(lq);
  // Stack the two first-order conditions by hand.
  const Mat& A = lq.A[0];
  const Mat &B1 = lq.B[0][0], &B2 = lq.B[1][0];
  const Mat &Z1 = lq.Q[0][1], &Z2 = lq.Q[1][1];
  Mat S(3, 3);
  S << lq.R[0][0] + B1.transpose() * Z1 * B1, B1.transpose() * Z1 * B2,
      B2.transpose() * Z2 * B1, lq.R[1][0] + B2.transpose() * Z2 * B2;
  Mat Y(3, 3);
  Y << B1.transpose() * Z1 * A, B2.transpose() * Z2 * A;
  Vec y(3);
  y << B1.transpose() * lq.q[0][1] + lq.r[0][0],
      B2.transpose() * lq.q[1][1] + lq.r[1][0];
  const Mat K = S.inverse() * Y;
  const Vec k = S.inverse() * y;
  EXPECT_LT(max_abs_diff(sol.K[0][0], K.topRows(1)), 1e-10);
  EXPECT_LT(max_abs_diff(sol.K[1][0], K.bottomRows(2)), 1e-10);
  EXPECT_LT(max_abs_diff(sol.k[0][0], k.head(1)), 1e-10);
  EXPECT_LT(max_abs_diff(sol.k[1][0], k.tail(2)), 1e-10);
}

TEST(SolveTimeConsistent, TerminalOnlyMatchesStandard) {
  Rng rng(9);
  LqApprox lq = oracle::random_game(rng, 15, 3, {1, 1});
  for (int i = 0; i < 2; ++i)
    for (int t = 0; t < 15; ++t) {
      lq.Q[i][t].setZero();
      lq.q[i][t].setZero();
    }
  const CriticalSet terminal = {{15, MarginKind::kTarget}};
  const LqSolution tc = solve_time_consistent(lq, {terminal, terminal});
  const LqSolution st = solve_standard(lq);
  for (int i = 0; i < 2; ++i)
    for (int t = 0; t < 15; ++t) {
      EXPECT_EQ(tc.K[i][t], st.K[i][t]);
      EXPECT_EQ(tc.k[i][t], st.k[i][t]);
    }
}

TEST(SolveTimeConsistent, ValueResetsToStageCostAtCriticalTimes) {
  Rng rng(10);
  const LqApprox lq = oracle::random_game(rng, 20, 3, {1, 2});
  const PerPlayer<CriticalSet> crit = {
      {{4, MarginKind::kTarget}, {11, MarginKind::kFailure}, {20, MarginKind::kTarget}},
      {{7, MarginKind::kFailure}, {20, MarginKind::kTarget}}};
  const LqSolution sol = solve_time_consistent(lq, crit);
  for (int i = 0; i < 2; ++i)
    for (const auto& c : crit[i]) {
      EXPECT_EQ(sol.V[i][c.time].Z, lq.Q[i][c.time]);
      EXPECT_EQ(sol.V[i][c.time].z, lq.q[i][c.time]);
    }
}

TEST(SolveTimeConsistent, SegmentDecomposition) {
  Rng rng(12);
  const int T = 18, tau = 7;
  const LqApprox lq = oracle::random_game(rng, T, 4, {2});
  const LqSolution tc = solve_time_consistent(
      lq, {{{tau, MarginKind::kTarget}, {T, MarginKind::kTarget}}});
  const LqSolution late = solve_standard(slice(lq, tau, T));
  const LqSolution early = solve_standard(slice(lq, 0, tau));
  for (int t = tau; t < T; ++t)
    EXPECT_LT(max_abs_diff(tc.K[0][t], late.K[0][t - tau]), 1e-12);
  for (int t = 0; t < tau; ++t) {
    EXPECT_LT(max_abs_diff(tc.K[0][t], early.K[0][t]), 1e-12);
    EXPECT_LT(max_abs_diff(tc.k[0][t], early.k[0][t]), 1e-12);
  }
}

TEST(LqPlayerCost, MatchesValueFunction) {
  Rng rng(13);
  const LqApprox lq = oracle::random_game(rng, 9, 3, {1, 1});
  const LqSolution sol = solve_standard(lq);
  const Vec dx0 = rng.vector(3);
  const double c0 = lq_player_cost(lq, sol.K, sol.k, dx0, 0);
  const double cz = lq_player_cost(lq, sol.K, sol.k, Vec::Zero(3), 0);
  // Quadratic and linear parts of the cost-to-go.
  const ValuePair& V = sol.V[0][0];
  EXPECT_NEAR(c0 - cz, 0.5 * dx0.dot(V.Z * dx0) + V.z.dot(dx0), 1e-9);
}

TEST(SolveTimeConsistent, RejectsOutOfRangeCriticalTime) {
  Rng rng(14);
  const LqApprox lq = oracle::random_game(rng, 5, 2, {1});
  EXPECT_THROW(solve_time_consistent(lq, {{{6, MarginKind::kTarget}}}), std::out_of_range);
}

}  // namespace
}  // namespace ilqra
