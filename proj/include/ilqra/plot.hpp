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

// Static SVG rendering of planar paths with target/failure overlays.
// Output depends only on the inputs (fixed number formatting, no clocks).

#pragma once

#include "ilqra/scenarios.hpp"
#include "ilqra/types.hpp"

#include <string>
#include <vector>

namespace ilqra {

struct PlotOptions {
  int width = 800;
  int height = 800;
  std::string title;
  // Agent pairs closer than this (at their closest time) get a dashed
  // connector labelled with the time. <= 0 disables.
  double close_approach_distance = 8.0;
  // Only annotate close approaches for the first this-many trajectories.
  int annotate_limit = 3;
  // Legend text per agent; "agent k" when missing.
  std::vector<std::string> labels;
};

// positions: planar position of each agent inside the joint state. When
// geometry is empty a warning is appended and no overlays are drawn.
std::string render_svg(const std::vector<Trajectory>& trajectories,
                       const std::vector<PositionIndex>& positions,
                       const std::vector<GeometryShape>& geometry,
                       const PlotOptions& options,
                       std::vector<std::string>* warnings = nullptr);

}  // namespace ilqra
