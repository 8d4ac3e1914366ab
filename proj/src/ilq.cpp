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

#include "ilqra/ilq.hpp"

#include "ilqra/objective.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ilqra {

const char* to_string(Subroutine s) {
  return s == Subroutine::kPinchPoint ? "pp" : "tc";
}

Subroutine subroutine_from_string(const std::string& s) {
  if (s == "pp" || s == "pinch_point") return Subroutine::kPinchPoint;
  if (s == "tc" || s == "time_consistent") return Subroutine::kTimeConsistent;
  throw std::invalid_argument("unknown subroutine '" + s + "' (use pp or tc)");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kTargetReached: return "target_reached";
    case SolveStatus::kMaxIterations: return "max_iterations";
    case SolveStatus::kFailed: return "failed";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(control_weight > 0.0))
    throw std::invalid_argument("control weight must be > 0");
  if (!(convergence_tolerance > 0.0))
    throw std::invalid_argument("convergence tolerance must be > 0");
  if (!(initial_step > 0.0 && initial_step <= 1.0))
    throw std::invalid_argument("initial step must lie in (0, 1]");
  if (!(step_shrink > 0.0 && step_shrink < 1.0))
    throw std::invalid_argument("step shrink factor must lie in (0, 1)");
  if (max_iterations < 0 || max_backtracks < 0)
    throw std::invalid_argument("iteration limits must be nonnegative");
  if (!(hessian_regularization >= 0.0))
    throw std::invalid_argument("hessian regularization must be >= 0");
}

Trajectory rollout(const SystemSpec& system, const Vec& x0,
                   const AffineStrategy& strategy, double alpha,
                   int start_time) {
  const int T = strategy.horizon();
  const int N = system.num_players();
  Trajectory traj;
  traj.dt = system.dt();
  traj.states.reserve(T + 1);
  traj.states.push_back(x0);
  traj.controls.assign(N, TimeSeries<Vec>());
  for (auto& c : traj.controls) c.reserve(T);

  PerPlayer<Vec> u(N);
  for (int t = 0; t < T; ++t) {
    const Vec& x = traj.states[t];
    for (int i = 0; i < N; ++i) {
      u[i] = strategy.control(i, t, x, alpha);
      traj.controls[i].push_back(u[i]);
    }
    Vec next = system.step(x, u, start_time + t);
    bool finite = next.allFinite();
    for (const auto& ui : u) finite = finite && ui.allFinite();
    if (!finite) {
      std::ostringstream msg;
      msg << "non-finite rollout at step " << t << ", controls:";
      for (int i = 0; i < N; ++i)
        msg << " player_" << i << "=[" << u[i].transpose() << "]";
      throw RolloutError(t, msg.str());
    }
    traj.states.push_back(std::move(next));
  }
  return traj;
}

std::vector<double> objectives(const Problem& problem, const Trajectory& traj) {
  std::vector<double> J;
  J.reserve(problem.objectives.size());
  for (const auto& obj : problem.objectives) {
    J.push_back(
        cost_to_go(traj, obj.target, obj.failure, problem.start_time).initial());
  }
  return J;
}

double merit(const Problem& problem, const Trajectory& traj) {
  double sum = 0.0;
  for (double J : objectives(problem, traj)) sum += J;
  return sum;
}

PerPlayer<CriticalSet> critical_data(const Problem& problem,
                                     const Trajectory& traj,
                                     Subroutine subroutine) {
  PerPlayer<CriticalSet> out;
  for (const auto& obj : problem.objectives) {
    const auto seq =
        evaluate_margins(traj, obj.target, obj.failure, problem.start_time);
    if (subroutine == Subroutine::kPinchPoint) {
      out.push_back({pinch_point(seq.target, seq.failure)});
    } else {
      out.push_back(critical_set(seq.target, seq.failure));
    }
  }
  return out;
}

LqApprox build_lq_approx(const Problem& problem, const Trajectory& traj,
                         const PerPlayer<CriticalSet>& critical,
                         double control_weight, double regularization) {
  const SystemSpec& system = problem.system;
  const int T = traj.horizon();
  const int N = system.num_players();
  if (static_cast<int>(critical.size()) != N)
    throw DimensionError("critical data must be given for every player");

  LqApprox lq = LqApprox::zeros(T, system.state_dim(), system.control_dims());
  PerPlayer<Vec> u(N);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < N; ++i) u[i] = traj.controls[i][t];
    Linearization lin =
        system.linearize(traj.states[t], u, problem.start_time + t);
    lq.A[t] = std::move(lin.A);
    for (int i = 0; i < N; ++i) {
      lq.B[i][t] = std::move(lin.B[i]);
      const int m = system.control_dim(i);
      lq.R[i][t] = 2.0 * control_weight * Mat::Identity(m, m);
      lq.r[i][t] = 2.0 * control_weight * u[i];
    }
  }

  for (int i = 0; i < N; ++i) {
    const PlayerObjective& obj = problem.objectives[i];
    for (const CriticalPoint& c : critical[i]) {
      const MarginFn& m =
          c.kind == MarginKind::kTarget ? obj.target : obj.failure;
      const Vec& xbar = traj.states.at(c.time);
      const Quadratization quad =
          quadratize(m, xbar, problem.start_time + c.time, regularization);
      lq.Q[i][c.time] = quad.Q;
      // Deviation coordinates: the linear term is the margin gradient.
      lq.q[i][c.time] = quad.q + quad.Q * xbar;
    }
  }
  return lq;
}

double max_state_deviation(const Trajectory& a, const Trajectory& b) {
  double dev = 0.0;
  const size_t len = std::min(a.states.size(), b.states.size());
  for (size_t t = 0; t < len; ++t)
    dev = std::max(dev, (a.states[t] - b.states[t]).cwiseAbs().maxCoeff());
  return dev;
}

LineSearchResult line_search_update(const Problem& problem,
                                    const Trajectory& current,
                                    const PerPlayer<TimeSeries<Mat>>& K,
                                    const PerPlayer<TimeSeries<Vec>>& k,
                                    const SolverConfig& config) {
  AffineStrategy candidate;
  candidate.gains = K;
  candidate.feedforwards = k;
  candidate.reference = current;

  const double current_merit = merit(problem, current);
  double alpha = config.initial_step;
  bool have_fallback = false;
  LineSearchResult fallback;

  for (int b = 0; b <= config.max_backtracks; ++b, alpha *= config.step_shrink) {
    Trajectory traj;
    try {
      traj = rollout(problem.system, problem.initial_state, candidate, alpha,
                     problem.start_time);
    } catch (const RolloutError&) {
      continue;
    }
    const double m = merit(problem, traj);
    if (std::isnan(m)) continue;

    if (m <= current_merit + config.merit_slack) {
      LineSearchResult out;
      out.trajectory = std::move(traj);
      out.alpha = alpha;
      out.merit = m;
      out.backtracks = b;
      out.strategy = std::move(candidate);
      return out;
    }
    fallback.trajectory = std::move(traj);
    fallback.alpha = alpha;
    fallback.merit = m;
    fallback.backtracks = b;
    fallback.sufficient = false;
    have_fallback = true;
  }

  if (!have_fallback)
    throw RolloutError(-1, "every line-search rollout diverged");
  fallback.strategy = std::move(candidate);
  return fallback;
}

PerPlayer<TimeSeries<Vec>> zero_controls(const SystemSpec& system,
                                         int horizon) {
  PerPlayer<TimeSeries<Vec>> u;
  for (int i = 0; i < system.num_players(); ++i)
    u.emplace_back(horizon, Vec::Zero(system.control_dim(i)));
  return u;
}

namespace {

bool all_reached(const std::vector<double>& J) {
  return std::all_of(J.begin(), J.end(), [](double v) { return v <= 0.0; });
}

LqSolution solve_lq(const LqApprox& lq, const PerPlayer<CriticalSet>& critical,
                    Subroutine subroutine) {
  return subroutine == Subroutine::kPinchPoint
             ? solve_standard(lq)
             : solve_time_consistent(lq, critical);
}

}  // namespace

SolveResult ilq_solve(const Problem& problem,
                      const PerPlayer<TimeSeries<Vec>>& initial_controls,
                      const SolverConfig& config) {
  config.validate();
  SolveResult result;
  const SystemSpec& system = problem.system;
  if (static_cast<int>(problem.objectives.size()) != system.num_players())
    throw DimensionError("one objective per player is required");
  if (problem.initial_state.size() != system.state_dim())
    throw DimensionError("initial state dimension mismatch");

  Trajectory traj;
  try {
    traj = rollout(system, problem.initial_state,
                   AffineStrategy::open_loop(simulate_open_loop(
                       system, problem.initial_state, initial_controls,
                       problem.start_time)),
                   0.0, problem.start_time);
  } catch (const std::exception& e) {
    result.message = std::string("initial rollout failed: ") + e.what();
    return result;
  }
  if (traj.horizon() != problem.horizon) {
    throw DimensionError("initial controls do not span the problem horizon");
  }

  AffineStrategy strategy = AffineStrategy::open_loop(traj);
  std::vector<double> J = objectives(problem, traj);
  result.status = SolveStatus::kMaxIterations;

  int iter = 0;
  for (; iter < config.max_iterations; ++iter) {
    if (config.early_stop && all_reached(J)) {
      result.status = SolveStatus::kTargetReached;
      break;
    }

    const PerPlayer<CriticalSet> critical =
        critical_data(problem, traj, config.subroutine);
    LqApprox lq = build_lq_approx(problem, traj, critical,
                                  config.control_weight,
                                  config.hessian_regularization);

    LqSolution sol;
    LineSearchResult step;
    try {
      try {
        sol = solve_lq(lq, critical, config.subroutine);
      } catch (const SingularGameError&) {
        // Retry once with a stiffer control penalty.
        for (auto& player : lq.R)
          for (auto& R : player) R *= 10.0;
        sol = solve_lq(lq, critical, config.subroutine);
      }
      step = line_search_update(problem, traj, sol.K, sol.k, config);
    } catch (const std::exception& e) {
      result.status = SolveStatus::kFailed;
      result.message = "iteration " + std::to_string(iter + 1) + ": " + e.what();
      break;
    }

    IterationRecord record;
    record.iteration = iter + 1;
    record.alpha = step.alpha;
    record.max_deviation = max_state_deviation(step.trajectory, traj);
    record.critical = critical;
    J = objectives(problem, step.trajectory);
    record.objectives = J;
    result.log.push_back(record);

    traj = std::move(step.trajectory);
    strategy.gains = std::move(sol.K);
    strategy.feedforwards.clear();
    for (const auto& kk : sol.k) {
      TimeSeries<Vec> zeros;
      for (const auto& v : kk) zeros.push_back(Vec::Zero(v.size()));
      strategy.feedforwards.push_back(std::move(zeros));
    }
    strategy.reference = traj;

    if (record.max_deviation < config.convergence_tolerance) {
      result.status = SolveStatus::kConverged;
      ++iter;
      break;
    }
  }

  if (result.status == SolveStatus::kMaxIterations && config.early_stop &&
      all_reached(J)) {
    result.status = SolveStatus::kTargetReached;
  }
  result.iterations = iter;
  result.strategy = std::move(strategy);
  result.trajectory = std::move(traj);
  result.objectives = std::move(J);
  return result;
}

}  // namespace ilqra
