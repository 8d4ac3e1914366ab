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

// ilqra: solve, batch, plot and verify reach-avoid games from the shell.
//
//   ilqra solve  --scenario one_player --solver tc --out-dir out/one
//   ilqra batch  --scenario one_player --num-starts 100 --seed 1 --early-stop
//   ilqra plot   --trajectory out/one/trajectory.json --scenario one_player
//   ilqra verify --scenario one_player --solver pp --time 40
//
// ILQRA_OUT_DIR sets the default output directory (else ./ilqra_out).

#include "ilqra/experiments.hpp"
#include "ilqra/io.hpp"
#include "ilqra/plot.hpp"
#include "ilqra/scenarios.hpp"
#include "ilqra/verification.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

using namespace ilqra;
namespace fs = std::filesystem;

namespace {

std::string default_out_dir() {
  const char* env = std::getenv("ILQRA_OUT_DIR");
  return env && *env ? env : "ilqra_out";
}

struct Common {
  std::string scenario = "one_player";
  std::string solver = "tc";
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iters;
  bool early_stop = false;
  std::optional<double> control_weight;
  std::optional<int> t_react;
  std::string out_dir = default_out_dir();
};

void add_common(CLI::App* app, Common& c, bool solver_option = true) {
  app->add_option("--scenario", c.scenario,
                  "builtin id (one_player, defensive_driving, intersection) "
                  "or path to a JSON config");
  if (solver_option)
    app->add_option("--solver", c.solver, "pp or tc")
        ->check(CLI::IsMember({"pp", "tc"}));
  app->add_option("--seed", c.seed, "seed for the initial-state sampler");
  app->add_option("--max-iters", c.max_iters, "ILQ iteration cap");
  app->add_flag("--early-stop", c.early_stop,
                "stop as soon as every player has J_0 <= 0");
  app->add_option("--eta", c.control_weight, "control regularization weight");
  app->add_option("--t-react", c.t_react,
                  "defensive_driving reaction step (builtin scenario only)");
  app->add_option("--out-dir", c.out_dir, "output directory");
}

Scenario load(const Common& c) {
  if (c.t_react) {
    if (c.scenario != "defensive_driving")
      throw std::invalid_argument("--t-react applies to defensive_driving only");
    DefensiveDrivingConfig dc;
    dc.t_react = *c.t_react;
    return defensive_driving(dc);
  }
  return resolve_scenario(c.scenario);
}

SolverConfig make_config(const Scenario& s, const Common& c,
                         const std::string& solver) {
  SolverConfig cfg = s.solver_overrides.apply(SolverConfig{});
  cfg.subroutine = subroutine_from_string(solver);
  if (c.max_iters) cfg.max_iterations = *c.max_iters;
  if (c.early_stop) cfg.early_stop = true;
  if (c.control_weight) cfg.control_weight = *c.control_weight;
  cfg.validate();
  return cfg;
}

Vec start_state(const Scenario& s, const Common& c) {
  if (!c.seed) return s.initial.nominal;
  return s.sample_initial_states(1, *c.seed).front();
}

int cmd_solve(const Common& c) {
  const Scenario s = load(c);
  const SolverConfig cfg = make_config(s, c, c.solver);
  const SingleRun run = run_single(s, cfg, start_state(s, c), c.out_dir);
  const SolveResult& r = run.result;
  std::cout << s.name << " " << c.solver << ": " << to_string(r.status)
            << " after " << r.iterations << " iterations\n";
  for (size_t i = 0; i < r.objectives.size(); ++i)
    std::cout << "  " << s.player_names.at(i) << " J_0 = " << r.objectives[i]
              << "\n";
  for (const auto& p : run.written) std::cout << "  wrote " << p << "\n";
  if (r.status == SolveStatus::kFailed) {
    std::cerr << "solver failed: " << r.message << "\n";
    return 2;
  }
  return 0;
}

int cmd_batch(const Common& c, const std::string& solvers, int num_starts,
              int workers, const std::string& from_records) {
  std::vector<RunRecord> records;
  if (!from_records.empty()) {
    records = records_from_csv(read_text_file(from_records));
  } else {
    const Scenario s = load(c);
    std::vector<SolverConfig> configs;
    for (const char* k : {"pp", "tc"})
      if (solvers == "both" || solvers == k) configs.push_back(make_config(s, c, k));
    BatchOptions opt;
    opt.num_starts = num_starts;
    opt.seed = c.seed.value_or(1);
    opt.workers = workers;
    records = run_batch(s, configs, opt);
    fs::create_directories(c.out_dir);
    write_text_file((fs::path(c.out_dir) / "records.csv").string(),
                    records_to_csv(records));
  }
  const auto stats = summarize(records);
  if (from_records.empty()) {
    write_text_file((fs::path(c.out_dir) / "stats.csv").string(), stats_to_csv(stats));
    write_text_file((fs::path(c.out_dir) / "stats.txt").string(), stats_to_text(stats));
  }
  std::cout << stats_to_text(stats);
  return 0;
}

int cmd_plot(const std::vector<std::string>& files, const std::string& scenario,
             const std::string& output) {
  std::vector<Trajectory> trajs;
  for (const auto& f : files) trajs.push_back(load_trajectory(f));
  std::vector<PositionIndex> positions{{0, 1}};
  std::vector<GeometryShape> geometry;
  PlotOptions opt;
  if (!scenario.empty()) {
    const Scenario s = resolve_scenario(scenario);
    positions = subsystem_positions(s.system);
    geometry = scenario_geometry(s);
    opt.title = s.name;
    if (s.system.num_subsystems() == s.num_players()) opt.labels = s.player_names;
  }
  std::vector<std::string> warnings;
  const std::string svg = render_svg(trajs, positions, geometry, opt, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  if (const auto dir = fs::path(output).parent_path(); !dir.empty())
    fs::create_directories(dir);
  write_text_file(output, svg);
  std::cout << "wrote " << output << "\n";
  return 0;
}

int cmd_verify(const Common& c, int time, double radius, int samples,
               bool positions_only) {
  const Scenario s = load(c);
  const SolverConfig cfg = make_config(s, c, c.solver);
  const Problem problem = s.problem(start_state(s, c));
  const SolveResult r = ilq_solve(problem, s.initialization(), cfg);
  std::cout << "solve: " << to_string(r.status) << " after " << r.iterations
            << " iterations\n";
  if (r.status == SolveStatus::kFailed) {
    std::cerr << "solver failed: " << r.message << "\n";
    return 2;
  }
  TimeConsistencyOptions tc;
  tc.time = time;
  tc.radius = radius;
  tc.samples = samples;
  tc.seed = c.seed.value_or(1);
  if (positions_only)
    for (const auto& p : subsystem_positions(s.system))
      tc.perturb.insert(tc.perturb.end(), {p.x, p.y});
  const auto report = time_consistency_probe(problem, r, cfg, tc);

  NashProbeOptions np;
  np.seed = c.seed.value_or(1);
  nlohmann::json nash = nlohmann::json::array();
  for (int i = 0; i < s.num_players(); ++i) {
    np.player = i;
    nash.push_back(nlohmann::json::parse(nash_probe(problem, r.strategy, np).to_json()));
  }
  const nlohmann::json out = {
      {"time_consistency", nlohmann::json::parse(report.to_json())},
      {"nash", nash}};
  fs::create_directories(c.out_dir);
  const std::string path = (fs::path(c.out_dir) / "verify.json").string();
  write_text_file(path, out.dump(2) + "\n");
  std::cout << out.dump(2) << "\nwrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ilqra: iterative LQ reach-avoid games"};
  app.require_subcommand(1);

  Common solve_opts, batch_opts, verify_opts;

  auto* solve = app.add_subcommand("solve", "solve one scenario and write artifacts");
  add_common(solve, solve_opts);

  auto* batch = app.add_subcommand("batch", "seeded batch over random initial states");
  add_common(batch, batch_opts, false);
  std::string batch_solver = "both";
  int num_starts = 100, workers = 0;
  std::string from_records;
  batch->add_option("--solver", batch_solver, "pp, tc or both")
      ->check(CLI::IsMember({"pp", "tc", "both"}));
  batch->add_option("--num-starts", num_starts, "number of seeded starts")
      ->check(CLI::PositiveNumber);
  batch->add_option("--workers", workers, "worker threads (0 = all cores)");
  batch->add_option("--from-records", from_records,
                    "recompute the statistics from a records.csv");

  auto* plot = app.add_subcommand("plot", "render trajectory files to SVG");
  std::vector<std::string> plot_files;
  std::string plot_scenario, plot_output = (fs::path(default_out_dir()) / "plot.svg").string();
  plot->add_option("--trajectory", plot_files, "trajectory JSON or CSV files");
  plot->add_option("--scenario", plot_scenario, "scenario for geometry overlays");
  plot->add_option("--output", plot_output, "SVG path");

  auto* verify = app.add_subcommand("verify", "time-consistency and Nash probes");
  add_common(verify, verify_opts);
  int probe_time = 0, probe_samples = 10;
  double probe_radius = 0.1;
  bool all_states = false;
  verify->add_option("--time", probe_time, "probe step s");
  verify->add_option("--radius", probe_radius, "perturbation radius delta_x");
  verify->add_option("--samples", probe_samples, "perturbed samples");
  verify->add_flag("--all-states", all_states,
                   "perturb the full state, not only positions");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(solve_opts);
    if (*batch) return cmd_batch(batch_opts, batch_solver, num_starts, workers, from_records);
    if (*plot) return cmd_plot(plot_files, plot_scenario, plot_output);
    if (*verify)
      return cmd_verify(verify_opts, probe_time, probe_radius, probe_samples, !all_states);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
