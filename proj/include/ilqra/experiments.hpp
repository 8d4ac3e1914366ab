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

// Experiment drivers behind the CLI: single solves with artifacts, seeded
// batches with summary statistics, and horizon timing sweeps.

#pragma once

#include "ilqra/ilq.hpp"
#include "ilqra/scenarios.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ilqra {

// ---------------------------------------------------------------------------
// Per-run outcome metrics.

// Player `player` reached its target: solve did not fail and J_0 <= 0.
bool reached_target(const SolveResult& result, int player = 0);

// The player entered its target (l_t <= 0 for some t) and g_t <= 0 at every
// t from the first entry on.
bool safe_after_target(const Problem& problem, const Trajectory& traj,
                       int player = 0);

// ---------------------------------------------------------------------------
// Single solve.

struct SingleRun {
  Problem problem;
  SolverConfig config;
  SolveResult result;
  std::vector<std::string> written;  // artifact paths
};

// Solves the scenario from `x0` (nominal when empty) and, when out_dir is
// non-empty, writes trajectory.json, trajectory.csv, log.jsonl,
// summary.json and plot.svg there (creating the directory).
SingleRun run_single(const Scenario& scenario, const SolverConfig& config,
                     const Vec& x0, const std::string& out_dir);

// ---------------------------------------------------------------------------
// Batches.

struct RunRecord {
  int index = 0;
  std::string solver;  // "pp" | "tc"
  SolveStatus status = SolveStatus::kFailed;
  int iterations = 0;
  double objective = 0.0;  // player 0's J_0
  bool reached = false;
  bool safe_after = false;
  double seconds = 0.0;    // wall clock, not used by the statistics
};

struct BatchOptions {
  int num_starts = 100;
  std::uint64_t seed = 1;
  int workers = 0;  // <= 0: hardware concurrency
};

// Solves the same seeded starts with each config. Records are sorted by
// (config order, start index) whatever the scheduling.
std::vector<RunRecord> run_batch(const Scenario& scenario,
                                 const std::vector<SolverConfig>& configs,
                                 const BatchOptions& options);

struct BatchStats {
  std::string solver;
  int runs = 0;
  int failures = 0;  // status failed; excluded from the iteration stats
  int reached = 0;
  int safe_after = 0;
  double mean_iterations = 0.0;
  int max_iterations = 0;
};

// One row per solver in order of first appearance. A pure function of the
// records (wall clock is ignored).
std::vector<BatchStats> summarize(const std::vector<RunRecord>& records);

std::string records_to_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_csv(const std::string& text);
std::string stats_to_csv(const std::vector<BatchStats>& stats);
std::string stats_to_text(const std::vector<BatchStats>& stats);

// ---------------------------------------------------------------------------
// Horizon timing sweep.

struct TimingPoint {
  int horizon = 0;
  double seconds_per_iteration = 0.0;
};

// Runs `iterations` ILQ iterations (convergence test disabled) on the
// one-player scenario with each horizon and keeps the fastest of `repeats`.
std::vector<TimingPoint> horizon_timing(const std::vector<int>& horizons,
                                        int iterations, int repeats);

// Least-squares slope of log(seconds) against log(horizon).
double loglog_slope(const std::vector<TimingPoint>& points);

}  // namespace ilqra
