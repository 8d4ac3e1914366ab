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

#include "ilqra/verification.hpp"

#include "ilqra/objective.hpp"
#include "ilqra/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ilqra {

using json = nlohmann::json;

double brute_force_objective(const std::vector<double>& target,
                             const std::vector<double>& failure, int s) {
  const int T = static_cast<int>(target.size()) - 1;
  if (static_cast<int>(failure.size()) != T + 1)
    throw std::invalid_argument("margin sequences differ in length");
  if (s < 0 || s > T) throw std::out_of_range("s outside [0, T]");
  double best = std::numeric_limits<double>::infinity();
  for (int t = s; t <= T; ++t) {
    double worst = target[t];
    for (int tau = s; tau <= t; ++tau) worst = std::max(worst, failure[tau]);
    best = std::min(best, worst);
  }
  return best;
}

double brute_force_objective(const Trajectory& traj, const MarginFn& target,
                             const MarginFn& failure, int s, int time_offset) {
  std::vector<double> l, g;
  for (int t = 0; t <= traj.horizon(); ++t) {
    l.push_back(target(traj.states[t], time_offset + t));
    g.push_back(failure(traj.states[t], time_offset + t));
  }
  return brute_force_objective(l, g, s);
}

double relative_error(const Mat& analytic, const Mat& numeric) {
  if (analytic.size() == 0) return 0.0;
  const double scale = std::max(1.0, numeric.cwiseAbs().maxCoeff());
  return (analytic - numeric).cwiseAbs().maxCoeff() / scale;
}

FdReport finite_difference_check(const ScalarFn& f, const GradientFn& grad,
                                 const HessianFn& hess,
                                 const std::vector<Vec>& points, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step must be > 0");
  FdReport report;
  for (const Vec& x : points) {
    const int n = static_cast<int>(x.size());
    Vec num_grad(n);
    Mat num_hess(n, n);
    for (int k = 0; k < n; ++k) {
      Vec xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      num_grad[k] = (f(xp) - f(xm)) / (2.0 * h);
      if (hess) num_hess.col(k) = (grad(xp) - grad(xm)) / (2.0 * h);
    }
    report.gradient_error =
        std::max(report.gradient_error, relative_error(grad(x), num_grad));
    if (hess) {
      report.hessian_error =
          std::max(report.hessian_error, relative_error(hess(x), num_hess));
    }
  }
  return report;
}

FdReport check_margin(const MarginFn& m, const std::vector<Vec>& points, int t,
                      double h) {
  return finite_difference_check(
      [&](const Vec& x) { return m(x, t); },
      [&](const Vec& x) { return m.expand(x, t).gradient; },
      [&](const Vec& x) { return m.expand(x, t).hessian; }, points, h);
}

FdReport check_dynamics(const SystemSpec& system, const Vec& x,
                        const PerPlayer<Vec>& u, int t, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step must be > 0");
  const Linearization lin = system.linearize(x, u, t);
  const int n = static_cast<int>(x.size());
  Mat A(n, n);
  for (int k = 0; k < n; ++k) {
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    A.col(k) = (system.step(xp, u, t) - system.step(xm, u, t)) / (2.0 * h);
  }
  FdReport report;
  report.gradient_error = relative_error(lin.A, A);
  for (size_t i = 0; i < u.size(); ++i) {
    Mat B(n, u[i].size());
    for (int k = 0; k < u[i].size(); ++k) {
      PerPlayer<Vec> up = u, um = u;
      up[i][k] += h;
      um[i][k] -= h;
      B.col(k) = (system.step(x, up, t) - system.step(x, um, t)) / (2.0 * h);
    }
    report.hessian_error =
        std::max(report.hessian_error, relative_error(lin.B[i], B));
  }
  return report;
}

AffineStrategy truncate_strategy(const AffineStrategy& strategy, int s) {
  if (s < 0 || s > strategy.horizon())
    throw std::out_of_range("truncation step outside [0, T]");
  AffineStrategy out;
  out.reference.dt = strategy.reference.dt;
  out.reference.states.assign(strategy.reference.states.begin() + s,
                              strategy.reference.states.end());
  for (int i = 0; i < strategy.num_players(); ++i) {
    out.gains.emplace_back(strategy.gains[i].begin() + s,
                           strategy.gains[i].end());
    out.feedforwards.emplace_back(strategy.feedforwards[i].begin() + s,
                                  strategy.feedforwards[i].end());
    out.reference.controls.emplace_back(
        strategy.reference.controls[i].begin() + s,
        strategy.reference.controls[i].end());
  }
  return out;
}

ExcessStats excess_stats(std::vector<double> values) {
  ExcessStats st;
  if (values.empty()) return st;
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  st.min = values.front();
  st.max = values.back();
  st.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return st;
}

std::string TimeConsistencyReport::to_json(int indent) const {
  json j = {{"time", time},
            {"samples", excess.size() + failures},
            {"excess", excess},
            {"excess_stats",
             {{"min", stats.min}, {"median", stats.median}, {"max", stats.max}}},
            {"failures", failures}};
  return j.dump(indent);
}

TimeConsistencyReport time_consistency_probe(
    const Problem& problem, const SolveResult& solution,
    const SolverConfig& config, const TimeConsistencyOptions& options) {
  const int T = problem.horizon;
  const int s = options.time - problem.start_time;
  if (s < 0 || s >= T) throw std::out_of_range("probe time outside [0, T)");
  if (options.player < 0 ||
      options.player >= static_cast<int>(problem.objectives.size()))
    throw std::out_of_range("probe player out of range");

  const AffineStrategy tail = truncate_strategy(solution.strategy, s);
  const Vec& x_star = solution.trajectory.states.at(s);
  std::vector<int> indices = options.perturb;
  if (indices.empty())
    for (int k = 0; k < x_star.size(); ++k) indices.push_back(k);

  SolverConfig resolve = config;
  resolve.early_stop = false;

  TimeConsistencyReport report;
  report.time = options.time;
  Rng rng(options.seed);
  for (int j = 0; j < options.samples; ++j) {
    Vec x = x_star;
    const Vec d = rng.in_ball(static_cast<int>(indices.size()), options.radius);
    for (size_t k = 0; k < indices.size(); ++k) x[indices[k]] += d[k];

    Problem sub = problem;
    sub.initial_state = x;
    sub.start_time = problem.start_time + s;
    sub.horizon = T - s;

    try {
      const Trajectory a = rollout(problem.system, x, tail, 0.0, sub.start_time);
      const double Ja = objectives(sub, a)[options.player];

      std::vector<PerPlayer<TimeSeries<Vec>>> inits = {a.controls};
      for (const auto& c : options.restarts) {
        PerPlayer<TimeSeries<Vec>> u;
        for (const Vec& ui : c) u.emplace_back(sub.horizon, ui);
        inits.push_back(std::move(u));
      }
      double Jb = std::numeric_limits<double>::infinity();
      for (const auto& init : inits) {
        const SolveResult r = ilq_solve(sub, init, resolve);
        if (r.status != SolveStatus::kFailed)
          Jb = std::min(Jb, r.objectives[options.player]);
      }
      if (!std::isfinite(Jb)) {
        ++report.failures;
        continue;
      }
      report.excess.push_back(Ja - Jb);
    } catch (const std::exception&) {
      ++report.failures;
    }
  }
  report.stats = excess_stats(report.excess);
  return report;
}

std::string NashProbeReport::to_json(int indent) const {
  json j = {{"samples", samples},
            {"improvements", improvements},
            {"frequency", frequency()},
            {"best_improvement", best_improvement}};
  return j.dump(indent);
}

NashProbeReport nash_probe(const Problem& problem,
                           const AffineStrategy& strategy,
                           const NashProbeOptions& options) {
  const int i = options.player;
  if (i < 0 || i >= strategy.num_players())
    throw std::out_of_range("probe player out of range");
  const double base =
      objectives(problem, rollout(problem.system, problem.initial_state,
                                  strategy, 1.0, problem.start_time))[i];

  int dim = 0;
  for (size_t t = 0; t < strategy.gains[i].size(); ++t)
    dim += strategy.gains[i][t].size() + strategy.feedforwards[i][t].size();

  NashProbeReport report;
  report.best_improvement = -std::numeric_limits<double>::infinity();
  Rng rng(options.seed);
  for (int j = 0; j < options.samples; ++j) {
    const Vec d = rng.in_ball(dim, options.radius);
    AffineStrategy p = strategy;
    int k = 0;
    for (size_t t = 0; t < p.gains[i].size(); ++t) {
      Mat& K = p.gains[i][t];
      for (Eigen::Index c = 0; c < K.cols(); ++c)
        for (Eigen::Index r = 0; r < K.rows(); ++r) K(r, c) += d[k++];
      Vec& f = p.feedforwards[i][t];
      for (Eigen::Index r = 0; r < f.size(); ++r) f[r] += d[k++];
    }
    ++report.samples;
    double J = 0.0;
    try {
      J = objectives(problem, rollout(problem.system, problem.initial_state, p,
                                      1.0, problem.start_time))[i];
    } catch (const RolloutError&) {
      continue;
    }
    const double gain = base - J;
    report.best_improvement = std::max(report.best_improvement, gain);
    if (gain > options.tolerance) ++report.improvements;
  }
  if (report.samples == 0) report.best_improvement = 0.0;
  return report;
}

}  // namespace ilqra
