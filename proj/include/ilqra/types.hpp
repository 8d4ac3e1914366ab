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

// Shared value types: trajectories, affine feedback strategies, LQ game data
// and critical-time bookkeeping. All of these are plain values; once built
// they are never mutated by the solvers that consume them.

#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace ilqra {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class SystemSpec;

// Per-player, time-indexed sequences. Outer index is the player.
template <typename T>
using PerPlayer = std::vector<T>;
template <typename T>
using TimeSeries = std::vector<T>;

enum class MarginKind { kTarget, kFailure };

const char* to_string(MarginKind kind);

struct Trajectory {
  double dt = 0.1;
  // Joint states x_0..x_T.
  TimeSeries<Vec> states;
  // controls[i][t] is player i's input at step t, t = 0..T-1.
  PerPlayer<TimeSeries<Vec>> controls;

  int horizon() const { return static_cast<int>(states.size()) - 1; }
  int num_players() const { return static_cast<int>(controls.size()); }
  int state_dim() const {
    return states.empty() ? 0 : static_cast<int>(states.front().size());
  }

  // Structural invariants only (lengths and consistent dimensions).
  bool is_well_formed() const;
  bool is_finite() const;
};

// u^i_t = ubar^i_t - K^i_t (x_t - xbar_t) - alpha k^i_t
struct AffineStrategy {
  PerPlayer<TimeSeries<Mat>> gains;
  PerPlayer<TimeSeries<Vec>> feedforwards;
  Trajectory reference;

  int horizon() const { return reference.horizon(); }
  int num_players() const { return static_cast<int>(gains.size()); }

  Vec control(int player, int t, const Vec& x, double alpha) const;

  // Zero gains and feedforwards about the given reference.
  static AffineStrategy open_loop(Trajectory reference);
};

// Deviation-coordinate LQ game data about a reference trajectory. Stage
// state costs run over t = 0..T (index T is the terminal cost), control
// costs over t = 0..T-1.
struct LqApprox {
  TimeSeries<Mat> A;
  PerPlayer<TimeSeries<Mat>> B;
  PerPlayer<TimeSeries<Mat>> Q;
  PerPlayer<TimeSeries<Vec>> q;
  PerPlayer<TimeSeries<Mat>> R;
  PerPlayer<TimeSeries<Vec>> r;

  int horizon() const { return static_cast<int>(A.size()); }
  int num_players() const { return static_cast<int>(B.size()); }
  int state_dim() const { return A.empty() ? 0 : static_cast<int>(A[0].rows()); }
  int control_dim(int player) const {
    return static_cast<int>(B[player][0].cols());
  }

  // Zero-filled data with the given shape.
  static LqApprox zeros(int horizon, int state_dim,
                        const std::vector<int>& control_dims);
};

struct CriticalPoint {
  int time = 0;
  MarginKind kind = MarginKind::kTarget;

  friend bool operator==(const CriticalPoint&, const CriticalPoint&) = default;
};

// Entries are in strictly increasing time order. The active margin is the
// player's target (kTarget) or failure (kFailure) margin at that time.
using CriticalSet = std::vector<CriticalPoint>;

// True iff the trajectory's lengths and dimensions match the system.
bool validate_dimensions(const Trajectory& traj, const SystemSpec& system);

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace ilqra
