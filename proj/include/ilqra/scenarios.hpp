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
// Scenario definitions. A Scenario bundles a joint system, one (target,
// failure) margin pair per player, a horizon, where initial states come from,
// the initial open-loop controls, and optional solver overrides.
//
// Three built-in scenarios are provided:
//   one_player         single car reaching a disk among disk obstacles
//   defensive_driving  ego car vs. an oncoming car that is adversarial until
//                      t_react, after which the ego controls both cars
//   intersection       two cars and a pedestrian crossing a T-intersection
//
// Geometry that is not pinned down elsewhere (obstacle layout, road width,
// goal boxes, clearances, pedestrian speed bound) lives in the config structs
// below. Units: meters, radians, seconds.
//
///////////////////////////////////////////////////////////////////////////////

#pragma once

#include "ilqra/dynamics.hpp"
#include "ilqra/ilq.hpp"
#include "ilqra/margins.hpp"
#include "ilqra/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ilqra {

struct Disk2 {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 1.0;
};

// Samples a single bicycle at state offset `offset`: position uniform in an
// annulus about `center`, heading pointing at `center` plus a uniform offset
// in [-heading_spread, heading_spread], fixed speed, zero wheel angle.
struct RingSampler {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double min_radius = 1.0;
  double max_radius = 2.0;
  double heading_spread = 0.0;
  double speed = 0.0;
  int offset = 0;
};

// Uniform in the axis-aligned box [lower, upper] of the joint state.
struct BoxSampler {
  Vec lower;
  Vec upper;
};

struct InitialStates {
  Vec nominal;  // used by single solves when no seed is given
  std::optional<RingSampler> ring;
  std::optional<BoxSampler> box;
  // Rejection: discard samples inside any player's failure set at t = 0.
  bool reject_failure = true;
  int max_attempts = 10000;

  bool has_sampler() const { return ring.has_value() || box.has_value(); }
};

struct SolverOverrides {
  std::optional<Subroutine> subroutine;
  std::optional<double> control_weight;
  std::optional<int> max_iterations;
  std::optional<double> convergence_tolerance;
  std::optional<double> initial_step;
  std::optional<double> step_shrink;
  std::optional<int> max_backtracks;
  std::optional<double> hessian_regularization;
  std::optional<bool> early_stop;

  SolverConfig apply(SolverConfig config) const;
};

// Replaces player `player`'s initial control on steps
// [first_step, first_step + steps).
struct ControlPhase {
  int player = 0;
  int first_step = 0;
  int steps = 0;
  Vec control;
};

struct Scenario {
  std::string name;
  SystemSpec system;
  std::vector<std::string> player_names;
  std::vector<PlayerObjective> objectives;
  int horizon = 0;
  InitialStates initial;
  // Constant open-loop control per player used to initialize the solver.
  PerPlayer<Vec> initial_controls;
  SolverOverrides solver_overrides;
  std::vector<ControlPhase> initial_phases;

  int num_players() const { return system.num_players(); }

  Problem problem(const Vec& x0) const;
  Problem problem() const { return problem(initial.nominal); }
  PerPlayer<TimeSeries<Vec>> initialization(int horizon) const;
  PerPlayer<TimeSeries<Vec>> initialization() const {
    return initialization(horizon);
  }

  // n seeded initial states from the configured sampler (or n copies of the
  // nominal state when there is none). Throws when rejection sampling runs
  // out of attempts.
  std::vector<Vec> sample_initial_states(int n, std::uint64_t seed) const;

  // Structural checks (dimensions, horizon vs. allocation schedule).
  void validate() const;
};

struct OnePlayerConfig {
  int horizon = 80;
  double dt = kDefaultTimeStep;
  double wheelbase = kDefaultWheelbase;
  Disk2 target{{0.0, 0.0}, 1.0};
  std::vector<Disk2> obstacles{{{0.0, 5.0}, 1.5},
                               {{4.755, 1.545}, 1.5},
                               {{2.939, -4.045}, 1.5},
                               {{-2.939, -4.045}, 1.5},
                               {{-4.755, 1.545}, 1.5}};
  std::optional<double> steering_limit;  // |phi| bound, rad
  RingSampler sampler{{0.0, 0.0}, 8.0, 11.0, 0.6, 3.0, 0};
};

struct DefensiveDrivingConfig {
  int t_react = 10;
  int horizon = 40;
  double dt = kDefaultTimeStep;
  double wheelbase = kDefaultWheelbase;
  double road_half_width = 4.0;   // road spans |y| <= this
  double lane_center = 2.0;       // ego at -lane_center, oncoming at +
  double ego_start_x = 0.0;
  double oncoming_start_x = 40.0;
  double ego_speed = 10.0;
  double oncoming_speed = 10.0;
  double clearance = 3.0;
  double steering_limit = M_PI / 6.0;  // 30 degrees
  Eigen::Vector2d goal_lower{38.0, -4.0};
  Eigen::Vector2d goal_upper{60.0, 0.0};
};

struct IntersectionConfig {
  int horizon = 80;
  double dt = kDefaultTimeStep;
  double wheelbase = kDefaultWheelbase;
  // Horizontal road: y in [0, 2 * lane_width]; stem: x in
  // [-lane_width, lane_width], y <= 0.
  double lane_width = 4.0;
  double road_min_x = -60.0;
  double road_max_x = 60.0;
  double stem_min_y = -60.0;
  double car_clearance = 3.0;
  double pedestrian_clearance = 2.0;
  double pedestrian_speed_bound = 2.0;
  Vec car1_start = (Vec(5) << -30.0, 2.0, 0.0, 0.0, 8.0).finished();
  Vec car2_start = (Vec(5) << 2.0, -20.0, M_PI / 2.0, 0.0, 7.0).finished();
  Eigen::Vector2d pedestrian_start{-6.0, -6.0};
  // Constant walking velocity used to initialize the solver.
  Eigen::Vector2d pedestrian_initial_velocity{1.5, 0.0};
  // Goal boxes reach far past the lanes so that, inside, the signed
  // distance is the progress along the direction of travel.
  Eigen::Vector2d car1_goal_lower{30.0, -28.0};
  Eigen::Vector2d car1_goal_upper{80.0, 36.0};
  Eigen::Vector2d car2_goal_lower{-80.0, 4.0};
  Eigen::Vector2d car2_goal_upper{-20.0, 36.0};
  Eigen::Vector2d pedestrian_goal_lower{5.0, -30.0};
  Eigen::Vector2d pedestrian_goal_upper{40.0, 20.0};
  // Left-turn initialization for the turning car: steer at +turn_rate for
  // turn_steps steps from turn_start, hold, then unwind from unwind_start.
  int turn_start = 14;
  int unwind_start = 41;
  int turn_steps = 8;
  double turn_rate = 0.4;
  double hessian_regularization = 3.0;
};

Scenario one_player_reach_avoid(const OnePlayerConfig& config = {});
Scenario defensive_driving(const DefensiveDrivingConfig& config = {});
Scenario t_intersection(const IntersectionConfig& config = {});

// Built-in scenario by id: "one_player", "defensive_driving", "intersection".
Scenario builtin_scenario(const std::string& id);

// JSON config round trip (sections: name, system, players, margins, horizon,
// initial_states, solver_overrides).
std::string scenario_to_json(const Scenario& scenario, int indent = 2);
Scenario scenario_from_json(const std::string& text);
Scenario load_scenario_file(const std::string& path);

// Builtin id or path to a JSON config.
Scenario resolve_scenario(const std::string& id_or_path);

// Planar shapes referenced by a scenario's margins, for plotting.
struct GeometryShape {
  enum class Type { kDisk, kBox, kHalfPlane } type;
  MarginKind kind;
  int player;
  Eigen::Vector2d a;  // disk center | box lower | half-plane normal
  Eigen::Vector2d b;  // box upper
  double scalar = 0;  // disk radius | half-plane offset
};

std::vector<GeometryShape> scenario_geometry(const Scenario& scenario);

// Positions of each subsystem inside the joint state (bicycles and
// pedestrians both start with p_x, p_y).
std::vector<PositionIndex> subsystem_positions(const SystemSpec& system);

}  // namespace ilqra
