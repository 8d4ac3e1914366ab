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
// Margin functions over the joint state. Sign conventions:
//   target  margin l(x) <= 0  iff  x is in the target set,
//   failure margin g(x) >  0  iff  x is in the failure set.
//
// A MarginFn is an immutable expression tree. Leaves are geometric primitives
// (disks, half-planes, boxes, pairwise distances, scalar intervals); inner
// nodes are max / min / negate / time windows. Derivatives of max and min are
// taken from the active branch, ties going to the lowest list index.
//
///////////////////////////////////////////////////////////////////////////////

#pragma once

#include "ilqra/types.hpp"

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace ilqra {

// Indices of a planar position inside the joint state.
struct PositionIndex {
  int x = 0;
  int y = 1;

  Eigen::Vector2d extract(const Vec& state) const {
    return {state[x], state[y]};
  }
};

struct MarginExpansion {
  double value = 0.0;
  Vec gradient;
  Mat hessian;
};

namespace margin_nodes {

class Node {
 public:
  virtual ~Node() = default;
  virtual double value(const Vec& x, int t) const = 0;
  // Accumulates scale * (gradient, Hessian) into out; returns the value.
  virtual double expand(const Vec& x, int t, double scale, Vec& gradient,
                        Mat& hessian) const = 0;
};

using NodePtr = std::shared_ptr<const Node>;

// sign * (|p - center| - radius)
struct Disk final : Node {
  Eigen::Vector2d center;
  double radius;
  PositionIndex position;
  double sign;  // +1 target convention, -1 failure convention

  Disk(Eigen::Vector2d c, double r, PositionIndex p, double s)
      : center(c), radius(r), position(p), sign(s) {}
  double value(const Vec& x, int t) const override;
  double expand(const Vec& x, int t, double scale, Vec& g, Mat& H) const override;
};

// normal . p - offset
struct HalfPlane final : Node {
  Eigen::Vector2d normal;
  double offset;
  PositionIndex position;

  HalfPlane(Eigen::Vector2d n, double o, PositionIndex p)
      : normal(n), offset(o), position(p) {}
  double value(const Vec& x, int t) const override;
  double expand(const Vec& x, int t, double scale, Vec& g, Mat& H) const override;
};

// clearance - |p_i - p_j|
struct PairwiseDistance final : Node {
  PositionIndex first;
  PositionIndex second;
  double clearance;

  PairwiseDistance(PositionIndex a, PositionIndex b, double c)
      : first(a), second(b), clearance(c) {}
  double value(const Vec& x, int t) const override;
  double expand(const Vec& x, int t, double scale, Vec& g, Mat& H) const override;
};

// max(lower - x[index], x[index] - upper)
struct Interval final : Node {
  int index;
  double lower;
  double upper;

  Interval(int i, double lo, double hi) : index(i), lower(lo), upper(hi) {}
  double value(const Vec& x, int t) const override;
  double expand(const Vec& x, int t, double scale, Vec& g, Mat& H) const override;
};

// Signed distance to an axis-aligned box, negative inside.
struct Box final : Node {
  Eigen::Vector2d lower;
  Eigen::Vector2d upper;
  PositionIndex position;

  Box(Eigen::Vector2d lo, Eigen::Vector2d hi, PositionIndex p)
      : lower(lo), upper(hi), position(p) {}
  double value(const Vec& x, int t) const override;
  double expand(const Vec& x, int t, double scale, Vec& g, Mat& H) const override;
};

// 0.5 x'Mx + a'x + b (M symmetric; M = 0 gives an affine margin).
struct Quadratic final : Node {
  Mat M;
  Vec a;
  double b;

  Quadratic(Mat m, Vec lin, double c) : M(std::move(m)), a(std::move(lin)), b(c) {}
  double value(const Vec& x, int t) const override;
  double expand(const Vec& x, int t, double scale, Vec& g, Mat& H) const override;
};

// values[t], independent of the state. Mostly useful for synthetic tests.
struct TimeTable final : Node {
  std::vector<double> values;

  explicit TimeTable(std::vector<double> v) : values(std::move(v)) {}
  double value(const Vec& x, int t) const override;
  double expand(const Vec& x, int t, double scale, Vec& g, Mat& H) const override;
};

struct Extremum final : Node {
  std::vector<NodePtr> terms;
  bool is_max;

  Extremum(std::vector<NodePtr> ts, bool mx) : terms(std::move(ts)), is_max(mx) {}
  double value(const Vec& x, int t) const override;
  double expand(const Vec& x, int t, double scale, Vec& g, Mat& H) const override;
  size_t active_term(const Vec& x, int t) const;
};

struct Negate final : Node {
  NodePtr term;

  explicit Negate(NodePtr n) : term(std::move(n)) {}
  double value(const Vec& x, int t) const override;
  double expand(const Vec& x, int t, double scale, Vec& g, Mat& H) const override;
};

// term on first_step <= t <= last_step, -infinity elsewhere (inert under max).
struct TimeWindow final : Node {
  NodePtr term;
  int first_step;
  int last_step;

  TimeWindow(NodePtr n, int first, int last)
      : term(std::move(n)), first_step(first), last_step(last) {}
  bool active(int t) const { return t >= first_step && t <= last_step; }
  double value(const Vec& x, int t) const override;
  double expand(const Vec& x, int t, double scale, Vec& g, Mat& H) const override;
};

}  // namespace margin_nodes

class MarginFn {
 public:
  MarginFn() = default;
  MarginFn(margin_nodes::NodePtr node, MarginKind kind, std::string name);

  double operator()(const Vec& x, int t = 0) const { return node_->value(x, t); }
  double value(const Vec& x, int t = 0) const { return node_->value(x, t); }

  // Value, gradient and Hessian over the full joint state.
  MarginExpansion expand(const Vec& x, int t = 0) const;

  MarginKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const margin_nodes::NodePtr& node() const { return node_; }
  explicit operator bool() const { return static_cast<bool>(node_); }

  MarginFn renamed(std::string name) const { return {node_, kind_, std::move(name)}; }

 private:
  margin_nodes::NodePtr node_;
  MarginKind kind_ = MarginKind::kTarget;
  std::string name_;
};

// |p - center| - radius
MarginFn disk_target(const Eigen::Vector2d& center, double radius,
                     PositionIndex position);
// radius - |p - center|
MarginFn disk_failure(const Eigen::Vector2d& center, double radius,
                      PositionIndex position);
// normal . p - offset, positive beyond the boundary. normal must be unit.
MarginFn halfplane_failure(const Eigen::Vector2d& normal, double offset,
                           PositionIndex position);
// clearance - |p_i - p_j|. At p_i = p_j the value is clearance with zero
// derivatives.
MarginFn pairwise_distance_failure(PositionIndex first, PositionIndex second,
                                   double clearance);
// max(lower - x[index], x[index] - upper)
MarginFn box_interval_failure(int index, double lower, double upper);
// Signed distance to the box [lower, upper], negative inside.
MarginFn box_target(const Eigen::Vector2d& lower, const Eigen::Vector2d& upper,
                    PositionIndex position);
// Signed distance to the box, as a failure margin: positive outside it.
MarginFn box_exit_failure(const Eigen::Vector2d& lower,
                          const Eigen::Vector2d& upper, PositionIndex position);
MarginFn affine_margin(const Vec& a, double b, MarginKind kind);
MarginFn quadratic_margin(const Mat& M, const Vec& a, double b, MarginKind kind);
MarginFn constant_margin(int state_dim, double c, MarginKind kind);
MarginFn time_table_margin(std::vector<double> values, MarginKind kind);

// Pointwise max / min. Kind and name come from the first term unless given.
MarginFn combine_max(const std::vector<MarginFn>& terms, std::string name = {});
MarginFn combine_min(const std::vector<MarginFn>& terms, std::string name = {});
// -m, with the kind tag flipped.
MarginFn negate(const MarginFn& m);
// m on [first_step, last_step], -infinity elsewhere.
MarginFn time_window(const MarginFn& m, int first_step,
                     int last_step = std::numeric_limits<int>::max());

inline constexpr double kDefaultHessianRegularization = 1e-4;

// Local model m(x) ~ c + q'x + 0.5 x'Qx about xbar. Q is the Hessian with
// negative eigenvalues clamped to zero plus regularization * I, and
// q = grad m(xbar) - Q xbar, so the model's gradient at xbar is exact.
struct Quadratization {
  Mat Q;
  Vec q;
  double c = 0.0;
};

Quadratization quadratize(const MarginFn& m, const Vec& xbar, int t = 0,
                          double regularization = kDefaultHessianRegularization);

// Symmetric PSD projection: clamp eigenvalues below zero, then add
// regularization * I.
Mat project_psd(const Mat& H, double regularization);

}  // namespace ilqra
