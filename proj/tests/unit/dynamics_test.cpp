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

#include "ilqra/dynamics.hpp"
#include "ilqra/random.hpp"
#include "ilqra/scenarios.hpp"
#include "ilqra/verification.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

namespace ilqra {
namespace {

void expect_state(const BicycleState& s, double px, double py, double th,
                  double phi, double v) {
  EXPECT_NEAR(s.px, px, 1e-15);
  EXPECT_NEAR(s.py, py, 1e-15);
  EXPECT_NEAR(s.theta, th, 1e-15);
  EXPECT_NEAR(s.phi, phi, 1e-15);
  EXPECT_NEAR(s.v, v, 1e-15);
}

TEST(BicycleStep, StraightLine) {
  expect_state(bicycle_step({0, 0, 0, 0, 1}, 0, 0, 0.1, 4), 0.1, 0, 0, 0, 1);
}

TEST(BicycleStep, ZeroSpeedFixedPoint) {
  expect_state(bicycle_step({3, -2, 0.7, 0.1, 0}, 0, 0, 0.1, 4), 3, -2, 0.7,
               0.1, 0);
}

TEST(BicycleStep, HeadingAlongY) {
  const BicycleState s = bicycle_step({0, 0, M_PI / 2, 0, 2}, 0, 0, 0.1, 4);
  EXPECT_NEAR(s.px, 0.0, 1e-15);
  EXPECT_NEAR(s.py, 0.2, 1e-15);
}

TEST(PedestrianStep, SingleIntegrator) {
  EXPECT_TRUE(pedestrian_step({0, 0}, {1, 0}, 0.1, 2.0)
                  .isApprox(Eigen::Vector2d(0.1, 0.0)));
  EXPECT_EQ(pedestrian_step({1, 1}, {0, 0}, 0.1, 2.0), Eigen::Vector2d(1, 1));
}

TEST(PedestrianStep, SpeedClamp) {
  // Projection onto the speed ball, done by hand.
  const Eigen::Vector2d u(10, 0);
  const Eigen::Vector2d clamped = u * (2.0 / u.norm());
  const Eigen::Vector2d p = pedestrian_step({0, 0}, u, 0.1, 2.0);
  EXPECT_NEAR(p.x(), 0.1 * clamped.x(), 1e-15);
  EXPECT_NEAR(p.y(), 0.0, 1e-15);
  EXPECT_NEAR(p.x(), 0.2, 1e-15);
}

TEST(JointStep, ZeroInputZeroSpeedUnchanged) {
  const SystemSpec sys(0.1,
                       {std::make_shared<Bicycle>(), std::make_shared<Bicycle>()},
                       {2, 2});
  Vec x(10);
  x << 1, 2, 0.3, 0, 0, -4, 5, 1.0, 0.1, 0;
  EXPECT_EQ(sys.step(x, {Vec::Zero(2), Vec::Zero(2)}, 0), x);
}

TEST(JointStep, DefensiveDrivingAllocation) {
  DefensiveDrivingConfig c;
  const Scenario s = defensive_driving(c);
  const Vec x = s.initial.nominal;
  const Vec zero4 = Vec::Zero(4);
  Vec oncoming(2);
  oncoming << 0.3, 1.0;
  // Before t_react the oncoming player's input moves the oncoming car.
  const Vec before0 = s.system.step(x, {zero4, Vec::Zero(2)}, c.t_react - 1);
  const Vec before1 = s.system.step(x, {zero4, oncoming}, c.t_react - 1);
  EXPECT_GT((before1 - before0).segment(5, 5).norm(), 0.0);
  EXPECT_EQ((before1 - before0).head(5).norm(), 0.0);
  // After, it is ignored and the ego's inputs 3..4 drive the oncoming car.
  const Vec after0 = s.system.step(x, {zero4, Vec::Zero(2)}, c.t_react);
  const Vec after1 = s.system.step(x, {zero4, oncoming}, c.t_react);
  EXPECT_EQ(after0, after1);
  Vec ego(4);
  ego << 0, 0, 0.3, 1.0;
  EXPECT_EQ(s.system.step(x, {ego, Vec::Zero(2)}, c.t_react), before1);

  const Linearization lin_before = s.system.linearize(x, {zero4, oncoming}, 0);
  const Linearization lin_after = s.system.linearize(x, {zero4, oncoming}, c.t_react);
  EXPECT_GT(lin_before.B[1].norm(), 0.0);
  EXPECT_EQ(lin_after.B[1].norm(), 0.0);
  EXPECT_EQ(lin_before.B[0].rightCols(2).norm(), 0.0);
  EXPECT_GT(lin_after.B[0].rightCols(2).norm(), 0.0);
}

TEST(Linearize, PedestrianIsLinear) {
  const SystemSpec sys(0.1, {std::make_shared<Pedestrian>(2.0)}, {2});
  const Linearization lin =
      sys.linearize(Vec::Zero(2), {(Vec(2) << 0.5, 0.5).finished()}, 0);
  EXPECT_EQ(lin.A, Mat::Identity(2, 2));
  EXPECT_TRUE(lin.B[0].isApprox(0.1 * Mat::Identity(2, 2)));
}

TEST(Linearize, BicycleSpeedEntry) {
  const SystemSpec sys(0.1, {std::make_shared<Bicycle>()}, {2});
  Vec x(5);
  x << 0, 0, 0, 0, 3;
  const Linearization lin = sys.linearize(x, {Vec::Zero(2)}, 0);
  EXPECT_NEAR(lin.A(0, 4), 0.1, 1e-15);
  // Finite-difference oracle for the same entry.
  const double h = 1e-5;
  Vec xp = x, xm = x;
  xp[4] += h;
  xm[4] -= h;
  const double fd =
      (sys.step(xp, {Vec::Zero(2)}, 0)[0] - sys.step(xm, {Vec::Zero(2)}, 0)[0]) /
      (2 * h);
  EXPECT_NEAR(lin.A(0, 4), fd, 1e-9);
}

TEST(Linearize, RandomBicycleMatchesFiniteDifferences) {
  const SystemSpec sys(0.1, {std::make_shared<Bicycle>()}, {2});
  Rng rng(7);
  for (int k = 0; k < 100; ++k) {
    Vec x(5);
    x << rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-M_PI, M_PI),
        rng.uniform(-0.5, 0.5), rng.uniform(0, 12);
    const Vec u = rng.vector(2);
    EXPECT_LT(check_dynamics(sys, x, {u}, 0, 1e-5).max(), 1e-5);
  }
}

TEST(SystemSpec, RejectsBadDimensions) {
  const SystemSpec sys(0.1, {std::make_shared<Bicycle>()}, {2});
  EXPECT_THROW(sys.step(Vec::Zero(4), {Vec::Zero(2)}, 0), DimensionError);
  EXPECT_THROW(sys.step(Vec::Zero(5), {Vec::Zero(3)}, 0), DimensionError);
}

TEST(SimulateOpenLoop, LengthsAndFirstStep) {
  const SystemSpec sys(0.1, {std::make_shared<Pedestrian>(2.0)}, {2});
  PerPlayer<TimeSeries<Vec>> u(1, TimeSeries<Vec>(5, (Vec(2) << 1, 0).finished()));
  const Trajectory traj = simulate_open_loop(sys, Vec::Zero(2), u);
  EXPECT_EQ(traj.horizon(), 5);
  EXPECT_NEAR(traj.states.back()[0], 0.5, 1e-12);
}

}  // namespace
}  // namespace ilqra
