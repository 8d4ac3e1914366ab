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

#include "ilqra/scenarios.hpp"

#include "ilqra/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ilqra {

SolverConfig SolverOverrides::apply(SolverConfig c) const {
  if (subroutine) c.subroutine = *subroutine;
  if (control_weight) c.control_weight = *control_weight;
  if (max_iterations) c.max_iterations = *max_iterations;
  if (convergence_tolerance) c.convergence_tolerance = *convergence_tolerance;
  if (initial_step) c.initial_step = *initial_step;
  if (step_shrink) c.step_shrink = *step_shrink;
  if (max_backtracks) c.max_backtracks = *max_backtracks;
  if (hessian_regularization) c.hessian_regularization = *hessian_regularization;
  if (early_stop) c.early_stop = *early_stop;
  return c;
}

Problem Scenario::problem(const Vec& x0) const {
  return Problem{system, objectives, horizon, x0, 0};
}

PerPlayer<TimeSeries<Vec>> Scenario::initialization(int steps) const {
  PerPlayer<TimeSeries<Vec>> u;
  for (int i = 0; i < num_players(); ++i) {
    const Vec u0 = i < static_cast<int>(initial_controls.size())
                       ? initial_controls[i]
                       : Vec::Zero(system.control_dim(i));
    u.emplace_back(steps, u0);
  }
  for (const auto& ph : initial_phases)
    for (int t = ph.first_step; t < std::min(steps, ph.first_step + ph.steps); ++t)
      u[ph.player][t] = ph.control;
  return u;
}

void Scenario::validate() const {
  if (horizon < 1) throw std::invalid_argument(name + ": horizon must be >= 1");
  if (static_cast<int>(objectives.size()) != num_players())
    throw std::invalid_argument(name + ": one objective per player required");
  for (const auto& obj : objectives)
    if (!obj.target || !obj.failure)
      throw std::invalid_argument(name + ": every player needs both margins");
  if (initial.nominal.size() != system.state_dim())
    throw DimensionError(name + ": nominal initial state dimension mismatch");
  for (int i = 0; i < static_cast<int>(initial_controls.size()); ++i)
    if (initial_controls[i].size() != system.control_dim(i))
      throw DimensionError(name + ": initial control dimension mismatch");
  for (const auto& ph : initial_phases) {
    if (ph.player < 0 || ph.player >= num_players())
      throw std::invalid_argument(name + ": initial phase player out of range");
    if (ph.first_step < 0 || ph.steps < 0)
      throw std::invalid_argument(name + ": initial phase steps must be >= 0");
    if (ph.control.size() != system.control_dim(ph.player))
      throw DimensionError(name + ": initial phase control dimension mismatch");
  }
  for (const auto& phase : system.schedule())
    if (phase.first_step > horizon)
      throw std::invalid_argument(
          name + ": allocation switch lies beyond the horizon");
}

std::vector<Vec> Scenario::sample_initial_states(int n,
                                                 std::uint64_t seed) const {
  std::vector<Vec> out;
  if (!initial.has_sampler()) {
    out.assign(n, initial.nominal);
    return out;
  }
  Rng rng(seed);
  int attempts = 0;
  while (static_cast<int>(out.size()) < n) {
    if (++attempts > initial.max_attempts * std::max(n, 1))
      throw std::runtime_error(name + ": initial-state rejection sampling failed");
    Vec x = initial.nominal;
    if (initial.ring) {
      const RingSampler& r = *initial.ring;
      // Area-uniform radius.
      const double rho = std::sqrt(rng.uniform(r.min_radius * r.min_radius,
                                               r.max_radius * r.max_radius));
      const double angle = rng.uniform(-M_PI, M_PI);
      const double heading_offset =
          rng.uniform(-r.heading_spread, r.heading_spread);
      const double px = r.center.x() + rho * std::cos(angle);
      const double py = r.center.y() + rho * std::sin(angle);
      x[r.offset + 0] = px;
      x[r.offset + 1] = py;
      x[r.offset + 2] = std::atan2(r.center.y() - py, r.center.x() - px) +
                        heading_offset;
      x[r.offset + 3] = 0.0;
      x[r.offset + 4] = r.speed;
    } else {
      const BoxSampler& b = *initial.box;
      for (int k = 0; k < x.size(); ++k) x[k] = rng.uniform(b.lower[k], b.upper[k]);
    }
    bool ok = x.allFinite();
    if (ok && initial.reject_failure)
      for (const auto& obj : objectives) ok = ok && !(obj.failure(x, 0) > 0.0);
    if (ok) out.push_back(std::move(x));
  }
  return out;
}

std::vector<PositionIndex> subsystem_positions(const SystemSpec& system) {
  std::vector<PositionIndex> out;
  for (int s = 0; s < system.num_subsystems(); ++s) {
    const int off = system.subsystem_offset(s);
    out.push_back({off, off + 1});
  }
  return out;
}

Scenario one_player_reach_avoid(const OnePlayerConfig& config) {
  if (config.obstacles.empty())
    throw std::invalid_argument("one_player: at least one obstacle required");
  Scenario s{
      "one_player",
      SystemSpec(config.dt, {std::make_shared<Bicycle>(config.wheelbase)}, {2}),
      {"car"},
      {},
      config.horizon,
      {},
      {Vec::Zero(2)},
      {},
      {}};

  const PositionIndex pos{0, 1};
  std::vector<MarginFn> failures;
  for (const auto& obstacle : config.obstacles)
    failures.push_back(disk_failure(obstacle.center, obstacle.radius, pos));
  if (config.steering_limit) {
    failures.push_back(box_interval_failure(3, -*config.steering_limit,
                                            *config.steering_limit));
  }
  s.objectives.push_back(
      {disk_target(config.target.center, config.target.radius, pos)
           .renamed("target"),
       combine_max(failures, "obstacles")});

  const RingSampler& r = config.sampler;
  s.initial.nominal = Vec::Zero(5);
  s.initial.nominal << r.center.x() - r.max_radius, r.center.y(), 0.0, 0.0,
      r.speed;
  s.initial.ring = r;
  s.initial.reject_failure = true;
  s.validate();
  return s;
}

Scenario defensive_driving(const DefensiveDrivingConfig& c) {
  if (!(c.t_react > 0 && c.t_react < c.horizon))
    throw std::invalid_argument("defensive_driving: t_react must lie in (0, T)");

  const auto car = std::make_shared<Bicycle>(c.wheelbase);
  // Ego owns its own car throughout and the oncoming car from t_react on.
  AllocationPhase adversarial{0, {{{0, 0}, {0, 1}}, {{1, 0}, {1, 1}}}};
  AllocationPhase reacted{c.t_react, {{{0, 0}, {0, 1}}, {{0, 2}, {0, 3}}}};

  Scenario s{"defensive_driving",
             SystemSpec(c.dt, {car, car}, {4, 2}, {adversarial, reacted}),
             {"ego", "oncoming"},
             {},
             c.horizon,
             {},
             {Vec::Zero(4), Vec::Zero(2)},
             {},
             {}};

  const PositionIndex ego{0, 1};
  const PositionIndex onc{5, 6};
  const double w = c.road_half_width;
  auto road = [&](PositionIndex p) {
    return combine_max({halfplane_failure({0.0, 1.0}, w, p),
                        halfplane_failure({0.0, -1.0}, w, p)},
                       "road");
  };
  const MarginFn collision = pairwise_distance_failure(ego, onc, c.clearance);
  const MarginFn ego_road = road(ego);
  const MarginFn onc_road = road(onc);
  const MarginFn ego_steer =
      box_interval_failure(3, -c.steering_limit, c.steering_limit);
  const MarginFn onc_steer =
      box_interval_failure(8, -c.steering_limit, c.steering_limit);

  const MarginFn ego_failure = combine_max(
      {collision, ego_road, ego_steer,
       time_window(combine_max({onc_road, onc_steer}), c.t_react + 1)},
      "ego_failure");
  const MarginFn ego_target =
      box_target(c.goal_lower, c.goal_upper, ego).renamed("ego_goal");
  const MarginFn onc_target =
      negate(combine_max({collision, ego_road})).renamed("onc_target");

  s.objectives.push_back({ego_target, ego_failure});
  s.objectives.push_back({onc_target, onc_road.renamed("onc_failure")});

  s.initial.nominal = Vec::Zero(10);
  s.initial.nominal << c.ego_start_x, -c.lane_center, 0.0, 0.0, c.ego_speed,
      c.oncoming_start_x, c.lane_center, M_PI, 0.0, c.oncoming_speed;
  s.validate();
  return s;
}

Scenario t_intersection(const IntersectionConfig& c) {
  const auto car = std::make_shared<Bicycle>(c.wheelbase);
  const auto walker = std::make_shared<Pedestrian>(c.pedestrian_speed_bound);
  Scenario s{"intersection",
             SystemSpec(c.dt, {car, car, walker}, {2, 2, 2}),
             {"car_straight", "car_left", "pedestrian"},
             {},
             c.horizon,
             {},
             {Vec::Zero(2), Vec::Zero(2), c.pedestrian_initial_velocity},
             {},
             {}};

  const PositionIndex p1{0, 1}, p2{5, 6}, p3{10, 11};
  const double w = c.lane_width;
  const Eigen::Vector2d road_lo(c.road_min_x, 0.0), road_hi(c.road_max_x, 2 * w);
  const Eigen::Vector2d stem_lo(-w, c.stem_min_y), stem_hi(w, 0.5);

  const MarginFn c12 = pairwise_distance_failure(p1, p2, c.car_clearance);
  const MarginFn c13 = pairwise_distance_failure(p1, p3, c.pedestrian_clearance);
  const MarginFn c23 = pairwise_distance_failure(p2, p3, c.pedestrian_clearance);

  const MarginFn car1_road = box_exit_failure(road_lo, road_hi, p1);
  const MarginFn car2_road = combine_min(
      {box_exit_failure(road_lo, road_hi, p2), box_exit_failure(stem_lo, stem_hi, p2)},
      "road_or_stem");

  s.objectives.push_back(
      {box_target(c.car1_goal_lower, c.car1_goal_upper, p1).renamed("goal"),
       combine_max({c12, c13, car1_road}, "car_straight_failure")});
  s.objectives.push_back(
      {box_target(c.car2_goal_lower, c.car2_goal_upper, p2).renamed("goal"),
       combine_max({c12, c23, car2_road}, "car_left_failure")});
  s.objectives.push_back(
      {box_target(c.pedestrian_goal_lower, c.pedestrian_goal_upper, p3)
           .renamed("goal"),
       combine_max({c13, c23}, "pedestrian_failure")});

  const Vec left = (Vec(2) << c.turn_rate, 0.0).finished();
  s.initial_phases = {{1, c.turn_start, c.turn_steps, left},
                      {1, c.unwind_start, c.turn_steps, -left}};
  s.solver_overrides.hessian_regularization = c.hessian_regularization;

  s.initial.nominal = Vec::Zero(12);
  s.initial.nominal.segment(0, 5) = c.car1_start;
  s.initial.nominal.segment(5, 5) = c.car2_start;
  s.initial.nominal.segment(10, 2) = c.pedestrian_start;
  s.validate();
  return s;
}

Scenario builtin_scenario(const std::string& id) {
  if (id == "one_player") return one_player_reach_avoid();
  if (id == "defensive_driving") return defensive_driving();
  if (id == "intersection" || id == "t_intersection") return t_intersection();
  throw std::invalid_argument("unknown scenario id '" + id + "'");
}

namespace {

void collect_shapes(const margin_nodes::Node& node, MarginKind kind,
                    int player, std::vector<GeometryShape>& out) {
  namespace mn = margin_nodes;
  if (auto d = dynamic_cast<const mn::Disk*>(&node)) {
    out.push_back({GeometryShape::Type::kDisk,
                   d->sign > 0 ? MarginKind::kTarget : MarginKind::kFailure,
                   player, d->center, Eigen::Vector2d::Zero(), d->radius});
  } else if (auto b = dynamic_cast<const mn::Box*>(&node)) {
    out.push_back({GeometryShape::Type::kBox, kind, player, b->lower, b->upper, 0});
  } else if (auto h = dynamic_cast<const mn::HalfPlane*>(&node)) {
    out.push_back({GeometryShape::Type::kHalfPlane, MarginKind::kFailure,
                   player, h->normal, Eigen::Vector2d::Zero(), h->offset});
  } else if (auto e = dynamic_cast<const mn::Extremum*>(&node)) {
    for (const auto& t : e->terms) collect_shapes(*t, kind, player, out);
  } else if (auto n = dynamic_cast<const mn::Negate*>(&node)) {
    collect_shapes(*n->term, kind, player, out);
  } else if (auto w = dynamic_cast<const mn::TimeWindow*>(&node)) {
    collect_shapes(*w->term, kind, player, out);
  }
}

}  // namespace

std::vector<GeometryShape> scenario_geometry(const Scenario& scenario) {
  std::vector<GeometryShape> out;
  for (int i = 0; i < static_cast<int>(scenario.objectives.size()); ++i) {
    const auto& obj = scenario.objectives[i];
    // A negated target (e.g. "cause a collision") draws nothing of its own.
    if (!dynamic_cast<const margin_nodes::Negate*>(obj.target.node().get()))
      collect_shapes(*obj.target.node(), MarginKind::kTarget, i, out);
    collect_shapes(*obj.failure.node(), MarginKind::kFailure, i, out);
  }
  return out;
}

}  // namespace ilqra
