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

#include "ilqra/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ilqra {

Vec BicycleState::to_vector() const {
  Vec x(5);
  x << px, py, theta, phi, v;
  return x;
}

BicycleState BicycleState::from_vector(const Vec& x) {
  if (x.size() != 5) throw DimensionError("bicycle state must have 5 entries");
  return {x[0], x[1], x[2], x[3], x[4]};
}

BicycleState bicycle_step(const BicycleState& s, double omega, double a,
                          double dt, double wheelbase) {
  BicycleState next = s;
  next.px += dt * s.v * std::cos(s.theta);
  next.py += dt * s.v * std::sin(s.theta);
  next.theta += dt * s.v * std::tan(s.phi) / wheelbase;
  next.phi += dt * omega;
  next.v += dt * a;
  return next;
}

Eigen::Vector2d pedestrian_step(const Eigen::Vector2d& p,
                                const Eigen::Vector2d& u, double dt,
                                double speed_bound) {
  const Eigen::Vector2d clamped = u.cwiseMax(-speed_bound).cwiseMin(speed_bound);
  return p + dt * clamped;
}

Bicycle::Bicycle(double wheelbase) : wheelbase_(wheelbase) {
  if (!(wheelbase > 0.0)) throw std::invalid_argument("wheelbase must be > 0");
}

Vec Bicycle::step(const Vec& x, const Vec& u, double dt) const {
  return bicycle_step(BicycleState::from_vector(x), u[0], u[1], dt, wheelbase_)
      .to_vector();
}

void Bicycle::linearize(const Vec& x, const Vec& /*u*/, double dt, Mat& A,
                        Mat& B) const {
  const double theta = x[2];
  const double phi = x[3];
  const double v = x[4];
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cos_phi = std::cos(phi);

  A.setIdentity(5, 5);
  A(0, 2) = -dt * v * s;
  A(0, 4) = dt * c;
  A(1, 2) = dt * v * c;
  A(1, 4) = dt * s;
  A(2, 3) = dt * v / (wheelbase_ * cos_phi * cos_phi);
  A(2, 4) = dt * std::tan(phi) / wheelbase_;

  B.setZero(5, 2);
  B(3, 0) = dt;
  B(4, 1) = dt;
}

Pedestrian::Pedestrian(double speed_bound) : speed_bound_(speed_bound) {
  if (!(speed_bound > 0.0))
    throw std::invalid_argument("pedestrian speed bound must be > 0");
}

Vec Pedestrian::step(const Vec& x, const Vec& u, double dt) const {
  return pedestrian_step(x.head<2>(), u.head<2>(), dt, speed_bound_);
}

void Pedestrian::linearize(const Vec& /*x*/, const Vec& u, double dt, Mat& A,
                           Mat& B) const {
  A.setIdentity(2, 2);
  B.setZero(2, 2);
  for (int k = 0; k < 2; ++k)
    if (std::abs(u[k]) < speed_bound_) B(k, k) = dt;
}

SystemSpec::SystemSpec(double dt,
                       std::vector<std::shared_ptr<const Subsystem>> subsystems,
                       std::vector<int> control_dims,
                       std::vector<AllocationPhase> schedule)
    : dt_(dt),
      subsystems_(std::move(subsystems)),
      control_dims_(std::move(control_dims)),
      schedule_(std::move(schedule)) {
  if (!(dt_ > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (subsystems_.empty()) throw std::invalid_argument("no subsystems");
  for (const auto& s : subsystems_) {
    if (!s) throw std::invalid_argument("null subsystem");
    offsets_.push_back(state_dim_);
    state_dim_ += s->state_dim();
  }

  if (schedule_.empty()) {
    if (subsystems_.size() != control_dims_.size())
      throw DimensionError(
          "default allocation needs one subsystem per player");
    AllocationPhase phase;
    for (int s = 0; s < num_subsystems(); ++s) {
      if (subsystems_[s]->input_dim() != control_dims_[s])
        throw DimensionError("player " + std::to_string(s) +
                             " control dimension does not match subsystem");
      std::vector<InputOwner> owners;
      for (int k = 0; k < subsystems_[s]->input_dim(); ++k)
        owners.push_back({s, k});
      phase.owners.push_back(std::move(owners));
    }
    schedule_.push_back(std::move(phase));
  }

  std::sort(schedule_.begin(), schedule_.end(),
            [](const auto& a, const auto& b) { return a.first_step < b.first_step; });
  if (schedule_.front().first_step != 0)
    throw std::invalid_argument("allocation schedule must start at step 0");
  for (const auto& phase : schedule_) {
    if (static_cast<int>(phase.owners.size()) != num_subsystems())
      throw DimensionError("allocation phase must cover every subsystem");
    for (int s = 0; s < num_subsystems(); ++s) {
      if (static_cast<int>(phase.owners[s].size()) != subsystems_[s]->input_dim())
        throw DimensionError("allocation phase input count mismatch");
      for (const auto& owner : phase.owners[s]) {
        if (owner.player < 0) continue;
        if (owner.player >= num_players() || owner.index < 0 ||
            owner.index >= control_dims_[owner.player])
          throw DimensionError("allocation refers to a nonexistent input");
      }
    }
  }
}

int SystemSpec::total_control_dim() const {
  return std::accumulate(control_dims_.begin(), control_dims_.end(), 0);
}

const std::vector<std::vector<InputOwner>>& SystemSpec::allocation(int t) const {
  auto it = std::upper_bound(
      schedule_.begin(), schedule_.end(), t,
      [](int step, const AllocationPhase& p) { return step < p.first_step; });
  return std::prev(it)->owners;
}

void SystemSpec::check_dimensions(const Vec& x, const PerPlayer<Vec>& u) const {
  if (x.size() != state_dim_)
    throw DimensionError("state has dimension " + std::to_string(x.size()) +
                         ", expected " + std::to_string(state_dim_));
  if (static_cast<int>(u.size()) != num_players())
    throw DimensionError("expected controls for " +
                         std::to_string(num_players()) + " players");
  for (int i = 0; i < num_players(); ++i)
    if (u[i].size() != control_dims_[i])
      throw DimensionError("player " + std::to_string(i) +
                           " control has dimension " +
                           std::to_string(u[i].size()));
}

Vec SystemSpec::subsystem_input(int s, const PerPlayer<Vec>& u, int t) const {
  const auto& owners = allocation(t)[s];
  Vec us = Vec::Zero(static_cast<int>(owners.size()));
  for (size_t k = 0; k < owners.size(); ++k)
    if (owners[k].player >= 0) us[k] = u[owners[k].player][owners[k].index];
  return us;
}

Vec SystemSpec::step(const Vec& x, const PerPlayer<Vec>& u, int t) const {
  check_dimensions(x, u);
  Vec next(state_dim_);
  for (int s = 0; s < num_subsystems(); ++s) {
    const int ns = subsystems_[s]->state_dim();
    next.segment(offsets_[s], ns) = subsystems_[s]->step(
        x.segment(offsets_[s], ns), subsystem_input(s, u, t), dt_);
  }
  return next;
}

Linearization SystemSpec::linearize(const Vec& x, const PerPlayer<Vec>& u,
                                    int t) const {
  check_dimensions(x, u);
  Linearization lin;
  lin.A = Mat::Zero(state_dim_, state_dim_);
  for (int i = 0; i < num_players(); ++i)
    lin.B.push_back(Mat::Zero(state_dim_, control_dims_[i]));

  const auto& owners = allocation(t);
  Mat As, Bs;
  for (int s = 0; s < num_subsystems(); ++s) {
    const int ns = subsystems_[s]->state_dim();
    const int off = offsets_[s];
    subsystems_[s]->linearize(x.segment(off, ns), subsystem_input(s, u, t),
                              dt_, As, Bs);
    lin.A.block(off, off, ns, ns) = As;
    for (size_t k = 0; k < owners[s].size(); ++k) {
      const InputOwner& o = owners[s][k];
      if (o.player < 0) continue;
      lin.B[o.player].col(o.index).segment(off, ns) += Bs.col(k);
    }
  }
  return lin;
}

Trajectory simulate_open_loop(const SystemSpec& system, const Vec& x0,
                              const PerPlayer<TimeSeries<Vec>>& controls,
                              int start_time) {
  if (static_cast<int>(controls.size()) != system.num_players())
    throw DimensionError("controls must be given for every player");
  const size_t horizon = controls.empty() ? 0 : controls[0].size();
  Trajectory traj;
  traj.dt = system.dt();
  traj.controls = controls;
  traj.states.reserve(horizon + 1);
  traj.states.push_back(x0);
  PerPlayer<Vec> u(system.num_players());
  for (size_t t = 0; t < horizon; ++t) {
    for (int i = 0; i < system.num_players(); ++i) u[i] = controls[i].at(t);
    traj.states.push_back(
        system.step(traj.states.back(), u, start_time + static_cast<int>(t)));
  }
  return traj;
}

}  // namespace ilqra
