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

///////////////////////////////////////////////////////////////////////////////
//
// Reach-avoid objective-to-go and critical-time extraction.
//
//   J_s = min_{t in [s, T]} max{ l_t(x_t), max_{tau in [s, t]} g_tau(x_tau) }
//
// is computed for every s at once by the backward recursion
//
//   J_{T+1} = +inf,   J_t = max{ g_t(x_t), min{ J_{t+1}, l_t(x_t) } }.
//
// A time t is critical when the recursion's value is one of the two margins
// evaluated at t. The g-branch is tested first, so a tie counts as a failure.
//
///////////////////////////////////////////////////////////////////////////////

#pragma once

#include "ilqra/margins.hpp"
#include "ilqra/types.hpp"

#include <span>
#include <vector>

namespace ilqra {

struct MarginSequence {
  std::vector<double> target;   // l_t(x_t), t = 0..T
  std::vector<double> failure;  // g_t(x_t), t = 0..T
};

// Evaluates both margins along the trajectory. time_offset is added to the
// local step index, so truncated problems see absolute times.
MarginSequence evaluate_margins(const Trajectory& traj, const MarginFn& target,
                                const MarginFn& failure, int time_offset = 0);

// values[t] = J_t for t = 0..T (the +inf sentinel is not stored).
struct CostToGo {
  std::vector<double> values;

  double initial() const { return values.front(); }
};

CostToGo cost_to_go(std::span<const double> target,
                    std::span<const double> failure);
CostToGo cost_to_go(const Trajectory& traj, const MarginFn& target,
                    const MarginFn& failure, int time_offset = 0);

// Every time at which the backward pass fires, in increasing time order.
CriticalSet critical_set(std::span<const double> target,
                         std::span<const double> failure);
CriticalSet critical_set(const Trajectory& traj, const MarginFn& target,
                         const MarginFn& failure, int time_offset = 0);

// The final (smallest-time) assignment of the backward pass: the single
// time/margin pair that determines J_0.
CriticalPoint pinch_point(std::span<const double> target,
                          std::span<const double> failure);
CriticalPoint pinch_point(const Trajectory& traj, const MarginFn& target,
                          const MarginFn& failure, int time_offset = 0);

// Value of the margin a critical point refers to.
double critical_value(const MarginSequence& seq, const CriticalPoint& c);

}  // namespace ilqra
