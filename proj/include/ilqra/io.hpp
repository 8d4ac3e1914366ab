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

// Trajectory and log serialization.
//
// JSON:  {"dt": 0.1, "states": [[...], ...],
//         "controls": {"player_0": [[...], ...], ...}}
// CSV:   step,time,x_0..x_{n-1},u0_0..u0_{m0-1},u1_0,...
//        one row per state; control cells are empty on the last row.
// Log:   one JSON object per line,
//        {"iter", "objectives", "alpha", "max_deviation", "critical"}.
//
// Numbers are written in shortest round-trip form, so reading a file back
// gives bit-identical values.

#pragma once

#include "ilqra/ilq.hpp"
#include "ilqra/types.hpp"

#include <string>
#include <vector>

namespace ilqra {

std::string trajectory_to_json(const Trajectory& traj, int indent = -1);
Trajectory trajectory_from_json(const std::string& text);

std::string trajectory_to_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& text);

std::string iteration_log_jsonl(const std::vector<IterationRecord>& log);

// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);

// Both throw std::runtime_error naming the path on failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

void save_trajectory(const std::string& path, const Trajectory& traj);
// Dispatches on the extension: ".csv" or JSON otherwise.
Trajectory load_trajectory(const std::string& path);

}  // namespace ilqra
