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
#include "ilqra/plot.hpp"
#include "ilqra/random.hpp"
#include "ilqra/scenarios.hpp"

#include <gtest/gtest.h>

#include <chrono>

namespace ilqra {
namespace {

Trajectory line(double y0, int T) {
  Trajectory traj;
  for (int t = 0; t <= T; ++t) traj.states.push_back((Vec(2) << 0.5 * t, y0).finished());
  traj.controls.assign(1, TimeSeries<Vec>(T, Vec::Zero(2)));
  return traj;
}

TEST(RenderSvg, EmptyTrajectoryListHasGeometry) {
  const Scenario s = one_player_reach_avoid();
  std::vector<std::string> warnings;
  const std::string svg = render_svg({}, subsystem_positions(s.system),
                                     scenario_geometry(s), {}, &warnings);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("<circle"), std::string::npos);
  EXPECT_EQ(svg.find("<polyline"), std::string::npos);
  EXPECT_TRUE(warnings.empty());
}

TEST(RenderSvg, ByteIdenticalForSameInputs) {
  const Scenario s = t_intersection();
  const std::vector<Trajectory> trajs = {
      simulate_open_loop(s.system, s.initial.nominal, s.initialization())};
  PlotOptions opt;
  opt.title = "x";
  const auto a = render_svg(trajs, subsystem_positions(s.system), scenario_geometry(s), opt);
  const auto b = render_svg(trajs, subsystem_positions(s.system), scenario_geometry(s), opt);
  EXPECT_EQ(a, b);
}

TEST(RenderSvg, WarnsWithoutGeometry) {
  std::vector<std::string> warnings;
  const std::string svg = render_svg({line(0, 10)}, {{0, 1}}, {}, {}, &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
}

TEST(RenderSvg, CloseApproachIsAnnotated) {
  Trajectory traj;
  for (int t = 0; t <= 10; ++t)
    traj.states.push_back((Vec(4) << t, 0, 10 - t, 1).finished());
  traj.controls.assign(1, TimeSeries<Vec>(10, Vec::Zero(1)));
  traj.dt = 0.1;
  const std::string svg = render_svg({traj}, {{0, 1}, {2, 3}}, {}, {});
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
  EXPECT_NE(svg.find("t=0.50s"), std::string::npos);
}

TEST(RenderSvg, HundredTrajectoriesRenderQuickly) {
  Rng rng(1);
  std::vector<Trajectory> trajs;
  for (int k = 0; k < 100; ++k) trajs.push_back(line(rng.uniform(-5, 5), 80));
  const Scenario s = one_player_reach_avoid();
  const auto t0 = std::chrono::steady_clock::now();
  const std::string svg = render_svg(trajs, {{0, 1}}, scenario_geometry(s), {});
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 5.0);
  EXPECT_GT(svg.size(), 10000u);
}

}  // namespace
}  // namespace ilqra
