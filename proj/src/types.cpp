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

#include "ilqra/types.hpp"

#include "ilqra/dynamics.hpp"

namespace ilqra {

const char* to_string(MarginKind kind) {
  return kind == MarginKind::kTarget ? "target" : "failure";
}

bool Trajectory::is_well_formed() const {
  if (states.empty()) return false;
  const auto n = states.front().size();
  for (const auto& x : states)
    if (x.size() != n) return false;
  for (const auto& player : controls) {
    if (player.size() + 1 != states.size()) return false;
    if (player.empty()) continue;
    const auto m = player.front().size();
    for (const auto& u : player)
      if (u.size() != m) return false;
  }
  return true;
}

bool Trajectory::is_finite() const {
  for (const auto& x : states)
    if (!x.allFinite()) return false;
  for (const auto& player : controls)
    for (const auto& u : player)
      if (!u.allFinite()) return false;
  return true;
}

Vec AffineStrategy::control(int player, int t, const Vec& x,
                            double alpha) const {
  const Vec& ubar = reference.controls[player][t];
  return ubar - gains[player][t] * (x - reference.states[t]) -
         alpha * feedforwards[player][t];
}

AffineStrategy AffineStrategy::open_loop(Trajectory reference) {
  AffineStrategy s;
  const int n = reference.state_dim();
  for (const auto& player : reference.controls) {
    TimeSeries<Mat> K;
    TimeSeries<Vec> k;
    for (const auto& u : player) {
      K.push_back(Mat::Zero(u.size(), n));
      k.push_back(Vec::Zero(u.size()));
    }
    s.gains.push_back(std::move(K));
    s.feedforwards.push_back(std::move(k));
  }
  s.reference = std::move(reference);
  return s;
}

LqApprox LqApprox::zeros(int horizon, int state_dim,
                         const std::vector<int>& control_dims) {
  LqApprox lq;
  lq.A.assign(horizon, Mat::Zero(state_dim, state_dim));
  for (int m : control_dims) {
    lq.B.emplace_back(horizon, Mat::Zero(state_dim, m));
    lq.Q.emplace_back(horizon + 1, Mat::Zero(state_dim, state_dim));
    lq.q.emplace_back(horizon + 1, Vec::Zero(state_dim));
    lq.R.emplace_back(horizon, Mat::Zero(m, m));
    lq.r.emplace_back(horizon, Vec::Zero(m));
  }
  return lq;
}

bool validate_dimensions(const Trajectory& traj, const SystemSpec& system) {
  if (!traj.is_well_formed()) return false;
  if (traj.state_dim() != system.state_dim()) return false;
  if (traj.num_players() != system.num_players()) return false;
  for (int i = 0; i < system.num_players(); ++i)
    for (const auto& u : traj.controls[i])
      if (u.size() != system.control_dim(i)) return false;
  return true;
}

}  // namespace ilqra
