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

// Independent oracles and empirical probes.
//
// brute_force_objective evaluates
//
//   J_s = min_{t in [s, T]} max{ l_t, max_{tau in [s, t]} g_tau }
//
// by a direct double loop, sharing nothing with the backward recursion in
// objective.hpp. The probes only falsify: a clean report is evidence, not a
// certificate.

#pragma once

#include "ilqra/dynamics.hpp"
#include "ilqra/ilq.hpp"
#include "ilqra/margins.hpp"
#include "ilqra/types.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ilqra {

double brute_force_objective(const std::vector<double>& target,
                             const std::vector<double>& failure, int s);
double brute_force_objective(const Trajectory& traj, const MarginFn& target,
                             const MarginFn& failure, int s,
                             int time_offset = 0);

// ---------------------------------------------------------------------------
// Finite differences. Errors are |analytic - numeric|_inf divided by
// max(1, |numeric|_inf).

double relative_error(const Mat& analytic, const Mat& numeric);

struct FdReport {
  double gradient_error = 0.0;
  double hessian_error = 0.0;
  double max() const { return std::max(gradient_error, hessian_error); }
};

using ScalarFn = std::function<double(const Vec&)>;
using GradientFn = std::function<Vec(const Vec&)>;
using HessianFn = std::function<Mat(const Vec&)>;

// Max over points of the central-difference errors of grad and hess (the
// Hessian is differenced from grad). hess may be empty.
FdReport finite_difference_check(const ScalarFn& f, const GradientFn& grad,
                                 const HessianFn& hess,
                                 const std::vector<Vec>& points, double h);

FdReport check_margin(const MarginFn& m, const std::vector<Vec>& points,
                      int t, double h);

// Errors of A and B (reported as gradient_error / hessian_error).
FdReport check_dynamics(const SystemSpec& system, const Vec& x,
                        const PerPlayer<Vec>& u, int t, double h);

// ---------------------------------------------------------------------------
// Time-consistency probe.

// The tail of a strategy from step s on, expressed on the truncated horizon.
AffineStrategy truncate_strategy(const AffineStrategy& strategy, int s);

struct ExcessStats {
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

// Empty input gives all zeros.
ExcessStats excess_stats(std::vector<double> values);

struct TimeConsistencyOptions {
  int time = 0;                  // s, absolute step
  double radius = 0.1;           // delta_x
  int samples = 10;
  std::uint64_t seed = 1;
  std::vector<int> perturb;      // state indices to perturb; empty = all
  // Extra re-solve starts: constant per-player controls held over the
  // truncated horizon. The warm start (the truncated strategy's own
  // rollout) is always tried.
  std::vector<PerPlayer<Vec>> restarts;
  int player = 0;                // whose objective is compared
};

struct TimeConsistencyReport {
  int time = 0;
  std::vector<double> excess;    // one per successful sample
  ExcessStats stats;
  int failures = 0;

  std::string to_json(int indent = 2) const;
};

// For each sample x~ in the ball about x*_s: J_s of (a) the truncated
// strategy rolled out from x~ and (b) the best re-solve of the truncated
// problem from x~ with the same solver settings (early stop off). Reports
// J(a) - J(b). Re-solve failures are counted, not thrown.
TimeConsistencyReport time_consistency_probe(
    const Problem& problem, const SolveResult& solution,
    const SolverConfig& config, const TimeConsistencyOptions& options);

// ---------------------------------------------------------------------------
// Local Nash probe.

struct NashProbeOptions {
  int player = 0;
  double radius = 1e-3;          // delta_gamma, bound on the perturbation norm
  int samples = 20;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
};

struct NashProbeReport {
  int samples = 0;
  int improvements = 0;
  double best_improvement = 0.0;  // largest J decrease seen (may be < 0)

  double frequency() const {
    return samples ? static_cast<double>(improvements) / samples : 0.0;
  }
  std::string to_json(int indent = 2) const;
};

// Perturbs player i's gains and feedforwards jointly, uniformly in the
// ball of the given radius, rolls out at alpha = 1 and counts samples where
// J^i_0 drops by more than the tolerance.
NashProbeReport nash_probe(const Problem& problem,
                           const AffineStrategy& strategy,
                           const NashProbeOptions& options);

}  // namespace ilqra
