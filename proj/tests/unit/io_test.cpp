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
#include "ilqra/io.hpp"
#include "ilqra/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

namespace ilqra {
namespace {

Trajectory random_traj(std::uint64_t seed) {
  Rng rng(seed);
  Trajectory traj;
  traj.dt = 0.1;
  for (int t = 0; t <= 6; ++t) traj.states.push_back(rng.vector(5, -1e3, 1e3));
  traj.controls.resize(2);
  for (int t = 0; t < 6; ++t) {
    traj.controls[0].push_back(rng.vector(2) * 1e-7);
    traj.controls[1].push_back(rng.vector(3));
  }
  traj.states[2][1] = 1.0 / 3.0;
  traj.states[3][0] = -0.0;
  traj.states[4][4] = 5e-324;
  return traj;
}

void expect_bit_exact(const Trajectory& a, const Trajectory& b) {
  EXPECT_EQ(a.dt, b.dt);
  ASSERT_EQ(a.states.size(), b.states.size());
  for (size_t t = 0; t < a.states.size(); ++t) EXPECT_EQ(a.states[t], b.states[t]);
  ASSERT_EQ(a.controls.size(), b.controls.size());
  for (size_t i = 0; i < a.controls.size(); ++i) EXPECT_EQ(a.controls[i], b.controls[i]);
}

TEST(TrajectoryJson, RoundTripIsBitExact) {
  const Trajectory a = random_traj(1);
  expect_bit_exact(a, trajectory_from_json(trajectory_to_json(a)));
}

TEST(TrajectoryCsv, RoundTripIsBitExact) {
  const Trajectory a = random_traj(2);
  const Trajectory b = trajectory_from_csv(trajectory_to_csv(a));
  ASSERT_EQ(a.states.size(), b.states.size());
  for (size_t t = 0; t < a.states.size(); ++t) EXPECT_EQ(a.states[t], b.states[t]);
  EXPECT_EQ(a.controls, b.controls);
  EXPECT_NEAR(a.dt, b.dt, 1e-15);
}

TEST(TrajectoryCsv, Header) {
  const std::string csv = trajectory_to_csv(random_traj(3));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "step,time,x_0,x_1,x_2,x_3,x_4,u0_0,u0_1,u1_0,u1_1,u1_2");
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e300, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Files, SaveLoadDispatchOnExtension) {
  const auto dir = std::filesystem::temp_directory_path() / "ilqra_io_test";
  std::filesystem::create_directories(dir);
  const Trajectory a = random_traj(4);
  for (const char* name : {"t.json", "t.csv"}) {
    const std::string path = (dir / name).string();
    save_trajectory(path, a);
    const Trajectory b = load_trajectory(path);
    EXPECT_EQ(a.states, b.states) << name;
  }
  std::filesystem::remove_all(dir);
}

TEST(Files, MissingFileNamesPath) {
  try {
    load_trajectory("/no/such/traj.json");
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("/no/such/traj.json"), std::string::npos);
  }
}

TEST(IterationLog, OneJsonObjectPerLine) {
  IterationRecord r;
  r.iteration = 3;
  r.objectives = {-0.5, 0.25};
  r.alpha = 0.5;
  r.max_deviation = 0.01;
  r.critical = {{{7, MarginKind::kTarget}}, {{2, MarginKind::kFailure}}};
  const std::string log = iteration_log_jsonl({r, r});
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 2);
  EXPECT_NE(log.find("\"iter\":3"), std::string::npos);
  EXPECT_NE(log.find("\"failure\""), std::string::npos);
}

}  // namespace
}  // namespace ilqra
