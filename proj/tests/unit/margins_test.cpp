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
#include "ilqra/margins.hpp"
#include "ilqra/random.hpp"
#include "ilqra/verification.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace ilqra {
namespace {

Vec pos(double x, double y) { return (Vec(2) << x, y).finished(); }

const PositionIndex kP{0, 1};

TEST(DiskTarget, Values) {
  const MarginFn m = disk_target({0, 0}, 1.0, kP);
  EXPECT_DOUBLE_EQ(m(pos(2, 0)), 1.0);
  EXPECT_DOUBLE_EQ(m(pos(0, 1)), 0.0);
  EXPECT_DOUBLE_EQ(m(pos(0, 0)), -1.0);
  EXPECT_EQ(m.kind(), MarginKind::kTarget);
}

TEST(DiskFailure, ValuesAndGradient) {
  const MarginFn m = disk_failure({0, 0}, 1.0, kP);
  EXPECT_DOUBLE_EQ(m(pos(0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(m(pos(3, 0)), -2.0);
  const MarginExpansion e = m.expand(pos(2, 0));
  EXPECT_NEAR(e.gradient[0], -1.0, 1e-15);
  EXPECT_NEAR(e.gradient[1], 0.0, 1e-15);
  EXPECT_EQ(m.kind(), MarginKind::kFailure);
}

TEST(HalfPlaneFailure, RoadEdge) {
  const MarginFn m = halfplane_failure({0, 1}, 3.0, kP);
  EXPECT_DOUBLE_EQ(m(pos(5, 4)), 1.0);
  EXPECT_DOUBLE_EQ(m(pos(5, 3)), 0.0);
  EXPECT_TRUE(m.expand(pos(1, 2)).hessian.isZero());
}

TEST(PairwiseDistance, Values) {
  Vec x(4);
  x << 0, 0, 10, 0;
  const MarginFn m = pairwise_distance_failure({0, 1}, {2, 3}, 3.0);
  EXPECT_DOUBLE_EQ(m(x), -7.0);
  x[2] = 3.0;
  EXPECT_DOUBLE_EQ(m(x), 0.0);
}

TEST(BoxInterval, SteeringBounds) {
  const MarginFn m = box_interval_failure(0, -M_PI / 6, M_PI / 6);
  Vec phi(1);
  phi << 0.0;
  EXPECT_NEAR(m(phi), -M_PI / 6, 1e-15);
  phi << 40.0 * M_PI / 180.0;
  EXPECT_NEAR(m(phi), M_PI / 18, 1e-15);
  phi << -40.0 * M_PI / 180.0;
  EXPECT_NEAR(m(phi), M_PI / 18, 1e-15);
}

TEST(Combinators, MaxTakesActiveBranchDerivatives) {
  Vec x(2);
  x << 0.5, 2.0;
  Vec a1(2), a2(2);
  a1 << 1, 0;
  a2 << 0, 1;
  const MarginFn f1 = affine_margin(a1, -7.5, MarginKind::kFailure);  // -7
  const MarginFn f2 = affine_margin(a2, -1.0, MarginKind::kFailure);  // 1
  const MarginFn m = combine_max({f1, f2});
  const MarginExpansion e = m.expand(x);
  EXPECT_DOUBLE_EQ(e.value, 1.0);
  EXPECT_EQ(e.gradient, a2);
}

TEST(Combinators, SingleTermIsIdentity) {
  const MarginFn d = disk_failure({1, 1}, 2.0, kP);
  const MarginFn m = combine_max({d});
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    const Vec x = rng.vector(2, -5, 5);
    EXPECT_EQ(m(x), d(x));
    EXPECT_EQ(m.expand(x).gradient, d.expand(x).gradient);
  }
}

TEST(Combinators, TiesBrokenByLowestIndex) {
  Vec a1(2), a2(2);
  a1 << 1, 0;
  a2 << 0, 1;
  const auto m = combine_max({affine_margin(a1, 0, MarginKind::kFailure),
                              affine_margin(a2, 0, MarginKind::kFailure)});
  const Vec x = pos(1, 1);
  EXPECT_EQ(m.expand(x).gradient, a1);
  const auto n = combine_min({affine_margin(a2, 0, MarginKind::kFailure),
                              affine_margin(a1, 0, MarginKind::kFailure)});
  EXPECT_EQ(n.expand(x).gradient, a2);
}

TEST(Combinators, NegateFlipsValueAndKind) {
  const MarginFn d = disk_failure({0, 0}, 1.0, kP);
  const MarginFn n = negate(d);
  EXPECT_DOUBLE_EQ(n(pos(3, 0)), 2.0);
  EXPECT_EQ(n.kind(), MarginKind::kTarget);
  EXPECT_EQ(n.expand(pos(3, 0)).gradient, -d.expand(pos(3, 0)).gradient);
}

TEST(Combinators, TimeWindowOutsideIsMinusInfinity) {
  const MarginFn m = time_window(disk_failure({0, 0}, 1.0, kP), 5, 7);
  EXPECT_EQ(m(pos(0, 0), 4), -std::numeric_limits<double>::infinity());
  EXPECT_DOUBLE_EQ(m(pos(0, 0), 6), 1.0);
  EXPECT_EQ(m(pos(0, 0), 8), -std::numeric_limits<double>::infinity());
}

TEST(Quadratize, AffineMargin) {
  Vec a(3);
  a << 1, -2, 0.5;
  const MarginFn m = affine_margin(a, 4.0, MarginKind::kTarget);
  const Vec xbar = (Vec(3) << 0.3, 0.1, -2).finished();
  const Quadratization qz = quadratize(m, xbar, 0, 1e-4);
  EXPECT_TRUE(qz.Q.isApprox(1e-4 * Mat::Identity(3, 3)));
  // Gradient of the model at xbar is exact.
  EXPECT_TRUE((qz.q + qz.Q * xbar).isApprox(a));
  const Quadratization raw = quadratize(m, xbar, 0, 0.0);
  EXPECT_TRUE(raw.Q.isZero());
  EXPECT_TRUE(raw.q.isApprox(a));
}

TEST(Quadratize, ConvexQuadratic) {
  Rng rng(11);
  const Mat L = rng.matrix(3, 3);
  const Mat M = L.transpose() * L;
  const Vec xbar = rng.vector(3);
  const double lam = 1e-4;
  const Quadratization qz =
      quadratize(quadratic_margin(M, Vec::Zero(3), 0.0, MarginKind::kTarget), xbar, 0, lam);
  const Mat Q = M + lam * Mat::Identity(3, 3);
  EXPECT_TRUE(qz.Q.isApprox(Q, 1e-12));
  EXPECT_TRUE(qz.q.isApprox(M * xbar - Q * xbar, 1e-9));
  EXPECT_NEAR((qz.q + lam * xbar).norm(), 0.0, 1e-12);
}

TEST(Quadratize, ReconstructionAtExpansionPoint) {
  const MarginFn m = disk_failure({1, -1}, 2.0, kP);
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    const Vec xbar = rng.vector(2, -4, 4);
    const Quadratization qz = quadratize(m, xbar, 0, 0.0);
    const double model = qz.c + qz.q.dot(xbar) + 0.5 * xbar.dot(qz.Q * xbar);
    EXPECT_NEAR(model, m(xbar), 1e-12);
    EXPECT_TRUE((qz.q + qz.Q * xbar).isApprox(m.expand(xbar).gradient, 1e-12));
  }
}

TEST(Quadratize, ClampsNegativeCurvature) {
  // Disk target is convex, its negation concave: clamp gives lambda * I.
  const MarginFn m = negate(disk_target({0, 0}, 1.0, kP));
  const Quadratization qz = quadratize(m, pos(2, 1), 0, 1e-4);
  const Eigen::SelfAdjointEigenSolver<Mat> eig(qz.Q);
  EXPECT_GE(eig.eigenvalues().minCoeff(), 1e-4 - 1e-15);
}

TEST(FiniteDifferences, MarginsAtRandomSmoothPoints) {
  Rng rng(2026);
  std::vector<Vec> pts;
  for (int k = 0; k < 100; ++k) pts.push_back(rng.vector(4, -6, 6));
  const PositionIndex p1{0, 1}, p2{2, 3};
  const std::vector<MarginFn> margins = {
      disk_target({0.5, 0.5}, 1.0, p1),
      disk_failure({-1, 2}, 1.5, p1),
      halfplane_failure({0.6, 0.8}, 1.0, p1),
      pairwise_distance_failure(p1, p2, 3.0),
      box_interval_failure(2, -0.5, 0.5),
      quadratic_margin(Mat::Identity(4, 4), Vec::Ones(4), -1.0, MarginKind::kTarget),
  };
  for (const auto& m : margins) {
    EXPECT_LT(check_margin(m, pts, 0, 1e-5).max(), 1e-5) << m.name();
  }
}

}  // namespace
}  // namespace ilqra
