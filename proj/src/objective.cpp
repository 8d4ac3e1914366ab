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

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>

namespace ilqra {

namespace {

void check_lengths(std::span<const double> target,
                   std::span<const double> failure) {
  if (target.size() != failure.size() || target.empty())
    throw std::invalid_argument(
        "margin sequences must be nonempty and of equal length");
}

// Runs the backward pass and reports each firing, from t = T down to 0.
template <typename OnFire>
std::vector<double> backward_pass(std::span<const double> target,
                                  std::span<const double> failure,
                                  OnFire&& on_fire) {
  check_lengths(target, failure);
  const int horizon = static_cast<int>(target.size()) - 1;
  std::vector<double> J(target.size());
  double next = std::numeric_limits<double>::infinity();
  for (int t = horizon; t >= 0; --t) {
    J[t] = std::max(failure[t], std::min(next, target[t]));
    if (J[t] == failure[t]) {
      on_fire(CriticalPoint{t, MarginKind::kFailure});
    } else if (J[t] == target[t]) {
      on_fire(CriticalPoint{t, MarginKind::kTarget});
    }
    next = J[t];
  }
  return J;
}

}  // namespace

MarginSequence evaluate_margins(const Trajectory& traj, const MarginFn& target,
                                const MarginFn& failure, int time_offset) {
  MarginSequence seq;
  seq.target.reserve(traj.states.size());
  seq.failure.reserve(traj.states.size());
  for (size_t t = 0; t < traj.states.size(); ++t) {
    const int abs_t = time_offset + static_cast<int>(t);
    seq.target.push_back(target(traj.states[t], abs_t));
    seq.failure.push_back(failure(traj.states[t], abs_t));
  }
  return seq;
}

CostToGo cost_to_go(std::span<const double> target,
                    std::span<const double> failure) {
  return {backward_pass(target, failure, [](const CriticalPoint&) {})};
}

CostToGo cost_to_go(const Trajectory& traj, const MarginFn& target,
                    const MarginFn& failure, int time_offset) {
  const auto seq = evaluate_margins(traj, target, failure, time_offset);
  return cost_to_go(seq.target, seq.failure);
}

CriticalSet critical_set(std::span<const double> target,
                         std::span<const double> failure) {
  CriticalSet set;
  backward_pass(target, failure,
                [&](const CriticalPoint& c) { set.push_back(c); });
  std::reverse(set.begin(), set.end());
  return set;
}

CriticalSet critical_set(const Trajectory& traj, const MarginFn& target,
                         const MarginFn& failure, int time_offset) {
  const auto seq = evaluate_margins(traj, target, failure, time_offset);
  return critical_set(seq.target, seq.failure);
}

CriticalPoint pinch_point(std::span<const double> target,
                          std::span<const double> failure) {
  std::optional<CriticalPoint> pinch;
  backward_pass(target, failure, [&](const CriticalPoint& c) { pinch = c; });
  if (!pinch)
    throw std::logic_error("reach-avoid backward pass never fired (NaN margin?)");
  return *pinch;
}

CriticalPoint pinch_point(const Trajectory& traj, const MarginFn& target,
                          const MarginFn& failure, int time_offset) {
  const auto seq = evaluate_margins(traj, target, failure, time_offset);
  return pinch_point(seq.target, seq.failure);
}

double critical_value(const MarginSequence& seq, const CriticalPoint& c) {
  return c.kind == MarginKind::kTarget ? seq.target.at(c.time)
                                       : seq.failure.at(c.time);
}

}  // namespace ilqra
