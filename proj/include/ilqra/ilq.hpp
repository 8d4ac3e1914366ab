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
// Iterative LQ solver for reach-avoid games. Each iteration:
//   1. find critical data on the current trajectory (one pinch point per
//      player, or every critical time),
//   2. linearize the dynamics and quadratize the active margins plus the
//      control regularization eta |u^i|^2,
//   3. solve the LQ game (standard or time-consistent recursion),
//   4. backtrack on the feedforward scale alpha until the summed reach-avoid
//      objectives do not increase.
// It stops when consecutive trajectories differ by less than the tolerance
// (max over t of |x_t - x_t^prev|_inf), or at the iteration limit.
//
///////////////////////////////////////////////////////////////////////////////

#pragma once

#include "ilqra/dynamics.hpp"
#include "ilqra/lq_game.hpp"
#include "ilqra/margins.hpp"
#include "ilqra/types.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ilqra {

struct PlayerObjective {
  MarginFn target;
  MarginFn failure;
};

// One reach-avoid game instance from a fixed initial state. start_time is
// the absolute time index of local step 0, so that truncated problems keep
// evaluating time-varying margins and allocations at the right times.
struct Problem {
  SystemSpec system;
  std::vector<PlayerObjective> objectives;
  int horizon = 0;
  Vec initial_state;
  int start_time = 0;

  int num_players() const { return system.num_players(); }
};

enum class Subroutine { kPinchPoint, kTimeConsistent };

const char* to_string(Subroutine s);
Subroutine subroutine_from_string(const std::string& s);

struct SolverConfig {
  Subroutine subroutine = Subroutine::kTimeConsistent;
  double control_weight = 1e-2;  // eta
  int max_iterations = 200;
  double convergence_tolerance = 1e-3;
  double initial_step = 1.0;
  double step_shrink = 0.5;
  int max_backtracks = 16;
  double merit_slack = 1e-9;
  double hessian_regularization = kDefaultHessianRegularization;
  // Stop as soon as every player's J^i_0 <= 0.
  bool early_stop = false;

  void validate() const;
};

class RolloutError : public std::runtime_error {
 public:
  RolloutError(int time, const std::string& what)
      : std::runtime_error(what), time_(time) {}
  int time() const { return time_; }

 private:
  int time_;
};

// Closed-loop simulation of u^i_t = ubar^i_t - K^i_t (x_t - xbar_t) - alpha k^i_t
// from x0. Throws RolloutError on the first non-finite state or control.
Trajectory rollout(const SystemSpec& system, const Vec& x0,
                   const AffineStrategy& strategy, double alpha,
                   int start_time = 0);

// J^i_0 of every player on the trajectory.
std::vector<double> objectives(const Problem& problem, const Trajectory& traj);
double merit(const Problem& problem, const Trajectory& traj);

// Per-player critical data for the chosen subroutine: the single pinch point,
// or every critical time.
PerPlayer<CriticalSet> critical_data(const Problem& problem,
                                     const Trajectory& traj,
                                     Subroutine subroutine);

// Deviation-coordinate LQ game about traj. Margin costs appear only at the
// listed critical times; R^i_t = 2 eta I and r^i_t = 2 eta ubar^i_t
// everywhere.
LqApprox build_lq_approx(const Problem& problem, const Trajectory& traj,
                         const PerPlayer<CriticalSet>& critical,
                         double control_weight,
                         double regularization = kDefaultHessianRegularization);

struct LineSearchResult {
  AffineStrategy strategy;
  Trajectory trajectory;
  double alpha = 0.0;
  double merit = 0.0;
  int backtracks = 0;
  // False when no step met the merit test and the smallest step was taken.
  bool sufficient = true;
};

// Backtracks alpha = a0, a0 * shrink, ... and accepts the first finite
// rollout whose merit does not exceed the current one by more than the
// slack; if none does, the smallest finite step. Throws RolloutError when
// every candidate diverges.
LineSearchResult line_search_update(const Problem& problem,
                                    const Trajectory& current,
                                    const PerPlayer<TimeSeries<Mat>>& K,
                                    const PerPlayer<TimeSeries<Vec>>& k,
                                    const SolverConfig& config);

struct IterationRecord {
  int iteration = 0;
  std::vector<double> objectives;  // J^i_0 after the update
  double alpha = 0.0;
  double max_deviation = 0.0;
  PerPlayer<CriticalSet> critical;  // data the LQ game was built from
};

enum class SolveStatus { kConverged, kTargetReached, kMaxIterations, kFailed };

const char* to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::kFailed;
  int iterations = 0;
  AffineStrategy strategy;
  Trajectory trajectory;
  std::vector<double> objectives;
  std::vector<IterationRecord> log;
  std::string message;

  bool ok() const { return status != SolveStatus::kFailed; }
};

// Runs the iteration from open-loop initial controls. Never throws for
// numerical trouble during the iteration; that is reported as kFailed with
// the log so far.
SolveResult ilq_solve(const Problem& problem,
                      const PerPlayer<TimeSeries<Vec>>& initial_controls,
                      const SolverConfig& config);

// Zero controls for every player over the problem horizon.
PerPlayer<TimeSeries<Vec>> zero_controls(const SystemSpec& system, int horizon);

// max_t |a_t - b_t|_inf over states.
double max_state_deviation(const Trajectory& a, const Trajectory& b);

}  // namespace ilqra
