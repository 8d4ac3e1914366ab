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

#include "ilqra/experiments.hpp"

#include "ilqra/io.hpp"
#include "ilqra/objective.hpp"
#include "ilqra/plot.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ilqra {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

bool reached_target(const SolveResult& result, int player) {
  return result.status != SolveStatus::kFailed &&
         player < static_cast<int>(result.objectives.size()) &&
         result.objectives[player] <= 0.0;
}

bool safe_after_target(const Problem& problem, const Trajectory& traj,
                       int player) {
  const PlayerObjective& obj = problem.objectives.at(player);
  const MarginSequence seq =
      evaluate_margins(traj, obj.target, obj.failure, problem.start_time);
  const auto entry = std::find_if(seq.target.begin(), seq.target.end(),
                                  [](double l) { return l <= 0.0; });
  if (entry == seq.target.end()) return false;
  for (size_t t = entry - seq.target.begin(); t < seq.failure.size(); ++t)
    if (seq.failure[t] > 0.0) return false;
  return true;
}

SingleRun run_single(const Scenario& scenario, const SolverConfig& config,
                     const Vec& x0, const std::string& out_dir) {
  Problem problem = scenario.problem(x0.size() ? x0 : scenario.initial.nominal);
  SolveResult result = ilq_solve(problem, scenario.initialization(), config);
  SingleRun run{std::move(problem), config, std::move(result), {}};
  if (out_dir.empty()) return run;

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };
  const SolveResult& r = run.result;

  save_trajectory(path("trajectory.json"), r.trajectory);
  save_trajectory(path("trajectory.csv"), r.trajectory);
  write_text_file(path("log.jsonl"), iteration_log_jsonl(r.log));

  json players = json::array();
  for (int i = 0; i < scenario.num_players(); ++i) {
    const PlayerObjective& obj = run.problem.objectives[i];
    const MarginSequence seq = evaluate_margins(r.trajectory, obj.target, obj.failure);
    players.push_back(
        {{"name", scenario.player_names.at(i)},
         {"objective", r.objectives.empty() ? 0.0 : r.objectives[i]},
         {"max_failure", *std::max_element(seq.failure.begin(), seq.failure.end())},
         {"min_target", *std::min_element(seq.target.begin(), seq.target.end())},
         {"safe_after_target", safe_after_target(run.problem, r.trajectory, i)}});
  }
  const json summary = {{"scenario", scenario.name},
                        {"solver", to_string(config.subroutine)},
                        {"status", to_string(r.status)},
                        {"iterations", r.iterations},
                        {"message", r.message},
                        {"players", players}};
  write_text_file(path("summary.json"), summary.dump(2) + "\n");

  PlotOptions plot;
  plot.title = scenario.name + " (" + to_string(config.subroutine) + ")";
  plot.labels = scenario.player_names;
  if (scenario.system.num_subsystems() != scenario.num_players()) plot.labels.clear();
  write_text_file(path("plot.svg"),
                  render_svg({r.trajectory}, subsystem_positions(scenario.system),
                             scenario_geometry(scenario), plot));
  run.written = {path("trajectory.json"), path("trajectory.csv"),
                 path("log.jsonl"), path("summary.json"), path("plot.svg")};
  return run;
}

std::vector<RunRecord> run_batch(const Scenario& scenario,
                                 const std::vector<SolverConfig>& configs,
                                 const BatchOptions& options) {
  if (options.num_starts < 1) throw std::invalid_argument("num_starts must be >= 1");
  const std::vector<Vec> starts =
      scenario.sample_initial_states(options.num_starts, options.seed);
  const auto init = scenario.initialization();
  const int jobs = static_cast<int>(configs.size()) * options.num_starts;

  std::vector<RunRecord> records(jobs);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int job = next++; job < jobs; job = next++) {
      const int c = job / options.num_starts;
      const int k = job % options.num_starts;
      const SolverConfig& cfg = configs[c];
      const Problem problem = scenario.problem(starts[k]);
      RunRecord& rec = records[job];
      rec.index = k;
      rec.solver = cfg.subroutine == Subroutine::kPinchPoint ? "pp" : "tc";
      const auto t0 = Clock::now();
      try {
        const SolveResult r = ilq_solve(problem, init, cfg);
        rec.status = r.status;
        rec.iterations = r.iterations;
        rec.objective = r.objectives.empty() ? 0.0 : r.objectives[0];
        rec.reached = reached_target(r);
        rec.safe_after = rec.reached && safe_after_target(problem, r.trajectory);
      } catch (const std::exception&) {
        rec.status = SolveStatus::kFailed;
      }
      rec.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    }
  };

  int workers = options.workers > 0
                    ? options.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, jobs);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return records;
}

std::vector<BatchStats> summarize(const std::vector<RunRecord>& records) {
  std::vector<BatchStats> out;
  std::map<std::string, size_t> slot;
  std::vector<long> iteration_sums;
  for (const auto& r : records) {
    auto it = slot.find(r.solver);
    if (it == slot.end()) {
      it = slot.emplace(r.solver, out.size()).first;
      out.push_back({});
      out.back().solver = r.solver;
      iteration_sums.push_back(0);
    }
    BatchStats& s = out[it->second];
    ++s.runs;
    if (r.status == SolveStatus::kFailed) {
      ++s.failures;
      continue;
    }
    s.reached += r.reached;
    s.safe_after += r.safe_after;
    iteration_sums[it->second] += r.iterations;
    s.max_iterations = std::max(s.max_iterations, r.iterations);
  }
  for (size_t k = 0; k < out.size(); ++k) {
    const int ok = out[k].runs - out[k].failures;
    out[k].mean_iterations = ok > 0 ? static_cast<double>(iteration_sums[k]) / ok : 0.0;
  }
  return out;
}

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << "index,solver,status,iterations,objective,reached,safe_after,seconds\n";
  for (const auto& r : records) {
    out << r.index << "," << r.solver << "," << to_string(r.status) << ","
        << r.iterations << "," << format_double(r.objective) << ","
        << r.reached << "," << r.safe_after << "," << format_double(r.seconds)
        << "\n";
  }
  return out.str();
}

namespace {

SolveStatus status_from_string(const std::string& s) {
  for (auto st : {SolveStatus::kConverged, SolveStatus::kTargetReached,
                  SolveStatus::kMaxIterations, SolveStatus::kFailed})
    if (s == to_string(st)) return st;
  throw std::invalid_argument("unknown status '" + s + "'");
}

}  // namespace

std::vector<RunRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8)
      throw std::invalid_argument("bad record row '" + line + "'");
    RunRecord r;
    r.index = std::stoi(cells[0]);
    r.solver = cells[1];
    r.status = status_from_string(cells[2]);
    r.iterations = std::stoi(cells[3]);
    r.objective = std::stod(cells[4]);
    r.reached = cells[5] == "1";
    r.safe_after = cells[6] == "1";
    r.seconds = std::stod(cells[7]);
    out.push_back(r);
  }
  return out;
}

std::string stats_to_csv(const std::vector<BatchStats>& stats) {
  std::ostringstream out;
  out << "solver,runs,failures,reached,mean_iterations,max_iterations,safe_after\n";
  for (const auto& s : stats) {
    out << s.solver << "," << s.runs << "," << s.failures << "," << s.reached
        << "," << format_double(s.mean_iterations) << "," << s.max_iterations
        << "," << s.safe_after << "\n";
  }
  return out.str();
}

std::string stats_to_text(const std::vector<BatchStats>& stats) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-6s %6s %8s %8s %10s %8s %10s\n", "solver",
                "runs", "failed", "reached", "mean iters", "max iter",
                "safe after");
  out << buf;
  for (const auto& s : stats) {
    std::snprintf(buf, sizeof(buf), "%-6s %6d %8d %8d %10.2f %8d %10d\n",
                  s.solver.c_str(), s.runs, s.failures, s.reached,
                  s.mean_iterations, s.max_iterations, s.safe_after);
    out << buf;
  }
  return out.str();
}

std::vector<TimingPoint> horizon_timing(const std::vector<int>& horizons,
                                        int iterations, int repeats) {
  std::vector<TimingPoint> out;
  for (int T : horizons) {
    OnePlayerConfig oc;
    oc.horizon = T;
    const Scenario sc = one_player_reach_avoid(oc);
    SolverConfig cfg;
    cfg.max_iterations = iterations;
    cfg.convergence_tolerance = std::numeric_limits<double>::min();
    cfg.early_stop = false;
    const Problem problem = sc.problem();
    const auto init = sc.initialization();
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < std::max(1, repeats); ++r) {
      const auto t0 = Clock::now();
      const SolveResult res = ilq_solve(problem, init, cfg);
      const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
      best = std::min(best, dt / std::max(1, res.iterations));
    }
    out.push_back({T, best});
  }
  return out;
}

double loglog_slope(const std::vector<TimingPoint>& points) {
  const double n = static_cast<double>(points.size());
  if (points.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : points) {
    const double x = std::log(static_cast<double>(p.horizon));
    const double y = std::log(p.seconds_per_iteration);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ilqra
