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
// Discrete-time multi-agent dynamics. A joint system is the concatenation of
// subsystems (one car, one pedestrian, ...) in order; its state is the
// stacked subsystem states. Player controls are not concatenated: an
// allocation schedule says, for each time step, which player input drives
// each subsystem input. This is how control authority can change hands
// mid-horizon while every step keeps the same (A, B^1..B^N) shape.
//
// All subsystems use forward-Euler steps x' = x + dt * f(x, u), and
// linearizations are the exact Jacobians of that discrete map.
//
///////////////////////////////////////////////////////////////////////////////

#pragma once

#include "ilqra/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace ilqra {

// Kinematic bicycle, rear-axle reference point.
struct BicycleState {
  double px = 0.0;     // m
  double py = 0.0;     // m
  double theta = 0.0;  // rad
  double phi = 0.0;    // front wheel angle, rad
  double v = 0.0;      // m/s

  Vec to_vector() const;
  static BicycleState from_vector(const Vec& x);
};

inline constexpr double kDefaultWheelbase = 4.0;  // m
inline constexpr double kDefaultTimeStep = 0.1;   // s

// state + dt * (v cos(theta), v sin(theta), v tan(phi) / L, omega, a).
// Not clamped: |phi| near pi/2 yields non-finite results.
BicycleState bicycle_step(const BicycleState& state, double omega, double a,
                          double dt, double wheelbase);

// p + dt * clamp(u, -bound, bound), componentwise.
Eigen::Vector2d pedestrian_step(const Eigen::Vector2d& p,
                                const Eigen::Vector2d& u, double dt,
                                double speed_bound);

class Subsystem {
 public:
  virtual ~Subsystem() = default;

  virtual std::string type() const = 0;
  virtual int state_dim() const = 0;
  virtual int input_dim() const = 0;

  virtual Vec step(const Vec& x, const Vec& u, double dt) const = 0;

  // Jacobians of step() with respect to x (A) and u (B).
  virtual void linearize(const Vec& x, const Vec& u, double dt, Mat& A,
                         Mat& B) const = 0;
};

class Bicycle final : public Subsystem {
 public:
  explicit Bicycle(double wheelbase = kDefaultWheelbase);

  std::string type() const override { return "bicycle"; }
  int state_dim() const override { return 5; }
  int input_dim() const override { return 2; }
  Vec step(const Vec& x, const Vec& u, double dt) const override;
  void linearize(const Vec& x, const Vec& u, double dt, Mat& A,
                 Mat& B) const override;

  double wheelbase() const { return wheelbase_; }

 private:
  double wheelbase_;
};

class Pedestrian final : public Subsystem {
 public:
  explicit Pedestrian(double speed_bound);

  std::string type() const override { return "pedestrian"; }
  int state_dim() const override { return 2; }
  int input_dim() const override { return 2; }
  Vec step(const Vec& x, const Vec& u, double dt) const override;
  // Inputs at or beyond the bound get a zero column (derivative of the clamp).
  void linearize(const Vec& x, const Vec& u, double dt, Mat& A,
                 Mat& B) const override;

  double speed_bound() const { return speed_bound_; }

 private:
  double speed_bound_;
};

// Which player input drives a subsystem input. player < 0 means unowned; the
// input is held at zero.
struct InputOwner {
  int player = -1;
  int index = 0;

  friend bool operator==(const InputOwner&, const InputOwner&) = default;
};

// owners[s][k] drives input k of subsystem s, from first_step onward (until
// the next phase begins).
struct AllocationPhase {
  int first_step = 0;
  std::vector<std::vector<InputOwner>> owners;
};

struct Linearization {
  Mat A;
  PerPlayer<Mat> B;
};

class SystemSpec {
 public:
  // An empty schedule means player i owns all inputs of subsystem i, which
  // requires one subsystem per player with matching input dimension.
  SystemSpec(double dt, std::vector<std::shared_ptr<const Subsystem>> subsystems,
             std::vector<int> control_dims,
             std::vector<AllocationPhase> schedule = {});

  double dt() const { return dt_; }
  int state_dim() const { return state_dim_; }
  int num_players() const { return static_cast<int>(control_dims_.size()); }
  int control_dim(int player) const { return control_dims_.at(player); }
  const std::vector<int>& control_dims() const { return control_dims_; }
  int total_control_dim() const;

  int num_subsystems() const { return static_cast<int>(subsystems_.size()); }
  const Subsystem& subsystem(int s) const { return *subsystems_.at(s); }
  int subsystem_offset(int s) const { return offsets_.at(s); }
  const std::vector<AllocationPhase>& schedule() const { return schedule_; }

  // Ownership table in force at time step t.
  const std::vector<std::vector<InputOwner>>& allocation(int t) const;

  // x_{t+1} = f_t(x_t, u^1_t, ..., u^N_t). Throws DimensionError.
  Vec step(const Vec& x, const PerPlayer<Vec>& u, int t) const;

  // A = df/dx, B^i = df/du^i. Columns of B^i for inputs player i does not
  // own at time t are exactly zero.
  Linearization linearize(const Vec& x, const PerPlayer<Vec>& u, int t) const;

  void check_dimensions(const Vec& x, const PerPlayer<Vec>& u) const;

 private:
  Vec subsystem_input(int s, const PerPlayer<Vec>& u, int t) const;

  double dt_;
  std::vector<std::shared_ptr<const Subsystem>> subsystems_;
  std::vector<int> control_dims_;
  std::vector<AllocationPhase> schedule_;
  std::vector<int> offsets_;
  int state_dim_ = 0;
};

// Forward simulation of open-loop controls from x0, starting at absolute
// time index start_time.
Trajectory simulate_open_loop(const SystemSpec& system, const Vec& x0,
                              const PerPlayer<TimeSeries<Vec>>& controls,
                              int start_time = 0);

}  // namespace ilqra
