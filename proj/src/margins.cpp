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

#include "ilqra/margins.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace ilqra {
namespace margin_nodes {

namespace {

// Adds scale * H2 into the 2x2 position block(s) of H.
void add_position_hessian(const PositionIndex& p, const Eigen::Matrix2d& H2,
                          double scale, Mat& H) {
  const int idx[2] = {p.x, p.y};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) H(idx[a], idx[b]) += scale * H2(a, b);
}

void add_position_gradient(const PositionIndex& p, const Eigen::Vector2d& g2,
                           double scale, Vec& g) {
  g[p.x] += scale * g2[0];
  g[p.y] += scale * g2[1];
}

// Hessian of |d| for d != 0.
Eigen::Matrix2d norm_hessian(const Eigen::Vector2d& d, double norm) {
  const Eigen::Vector2d n = d / norm;
  return (Eigen::Matrix2d::Identity() - n * n.transpose()) / norm;
}

}  // namespace

double Disk::value(const Vec& x, int /*t*/) const {
  return sign * ((position.extract(x) - center).norm() - radius);
}

double Disk::expand(const Vec& x, int t, double scale, Vec& g, Mat& H) const {
  const Eigen::Vector2d d = position.extract(x) - center;
  const double norm = d.norm();
  if (norm > 0.0) {
    add_position_gradient(position, d / norm, scale * sign, g);
    add_position_hessian(position, norm_hessian(d, norm), scale * sign, H);
  }
  return value(x, t);
}

double HalfPlane::value(const Vec& x, int /*t*/) const {
  return normal.dot(position.extract(x)) - offset;
}

double HalfPlane::expand(const Vec& x, int t, double scale, Vec& g,
                         Mat& /*H*/) const {
  add_position_gradient(position, normal, scale, g);
  return value(x, t);
}

double PairwiseDistance::value(const Vec& x, int /*t*/) const {
  return clearance - (first.extract(x) - second.extract(x)).norm();
}

double PairwiseDistance::expand(const Vec& x, int t, double scale, Vec& g,
                                Mat& H) const {
  const Eigen::Vector2d d = first.extract(x) - second.extract(x);
  const double norm = d.norm();
  if (norm > 0.0) {
    const Eigen::Vector2d n = d / norm;
    add_position_gradient(first, n, -scale, g);
    add_position_gradient(second, n, scale, g);
    const Eigen::Matrix2d Hn = norm_hessian(d, norm);
    const int a_idx[2] = {first.x, first.y};
    const int b_idx[2] = {second.x, second.y};
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        H(a_idx[r], a_idx[c]) -= scale * Hn(r, c);
        H(b_idx[r], b_idx[c]) -= scale * Hn(r, c);
        H(a_idx[r], b_idx[c]) += scale * Hn(r, c);
        H(b_idx[r], a_idx[c]) += scale * Hn(r, c);
      }
  }
  return value(x, t);
}

double Interval::value(const Vec& x, int /*t*/) const {
  return std::max(lower - x[index], x[index] - upper);
}

double Interval::expand(const Vec& x, int t, double scale, Vec& g,
                        Mat& /*H*/) const {
  const double below = lower - x[index];
  const double above = x[index] - upper;
  g[index] += (below >= above) ? -scale : scale;
  return value(x, t);
}

double Box::value(const Vec& x, int /*t*/) const {
  const Eigen::Vector2d c = 0.5 * (lower + upper);
  const Eigen::Vector2d h = 0.5 * (upper - lower);
  const Eigen::Vector2d q = (position.extract(x) - c).cwiseAbs() - h;
  const double outside = q.cwiseMax(0.0).norm();
  const double inside = std::min(std::max(q.x(), q.y()), 0.0);
  return outside + inside;
}

double Box::expand(const Vec& x, int t, double scale, Vec& g, Mat& H) const {
  const Eigen::Vector2d c = 0.5 * (lower + upper);
  const Eigen::Vector2d h = 0.5 * (upper - lower);
  const Eigen::Vector2d d = position.extract(x) - c;
  const Eigen::Vector2d s(d.x() >= 0.0 ? 1.0 : -1.0, d.y() >= 0.0 ? 1.0 : -1.0);
  const Eigen::Vector2d q = d.cwiseAbs() - h;

  if (q.x() > 0.0 || q.y() > 0.0) {
    const Eigen::Vector2d w = q.cwiseMax(0.0);
    const double norm = w.norm();
    add_position_gradient(position, s.cwiseProduct(w / norm), scale, g);
    if (q.x() > 0.0 && q.y() > 0.0) {
      const Eigen::Matrix2d S = s.asDiagonal();
      add_position_hessian(position, S * norm_hessian(w, norm) * S, scale, H);
    }
  } else {
    Eigen::Vector2d e = Eigen::Vector2d::Zero();
    const int k = (q.x() >= q.y()) ? 0 : 1;
    e[k] = s[k];
    add_position_gradient(position, e, scale, g);
  }
  return value(x, t);
}

double Quadratic::value(const Vec& x, int /*t*/) const {
  return 0.5 * x.dot(M * x) + a.dot(x) + b;
}

double Quadratic::expand(const Vec& x, int t, double scale, Vec& g,
                         Mat& H) const {
  g += scale * (M * x + a);
  H += scale * M;
  return value(x, t);
}

double TimeTable::value(const Vec& /*x*/, int t) const {
  if (t < 0 || t >= static_cast<int>(values.size()))
    throw std::out_of_range("time table margin has no entry for step " +
                            std::to_string(t));
  return values[t];
}

double TimeTable::expand(const Vec& x, int t, double /*scale*/, Vec& /*g*/,
                         Mat& /*H*/) const {
  return value(x, t);
}

size_t Extremum::active_term(const Vec& x, int t) const {
  size_t best = 0;
  double best_value = terms[0]->value(x, t);
  for (size_t k = 1; k < terms.size(); ++k) {
    const double v = terms[k]->value(x, t);
    if (is_max ? (v > best_value) : (v < best_value)) {
      best = k;
      best_value = v;
    }
  }
  return best;
}

double Extremum::value(const Vec& x, int t) const {
  return terms[active_term(x, t)]->value(x, t);
}

double Extremum::expand(const Vec& x, int t, double scale, Vec& g,
                        Mat& H) const {
  return terms[active_term(x, t)]->expand(x, t, scale, g, H);
}

double Negate::value(const Vec& x, int t) const { return -term->value(x, t); }

double Negate::expand(const Vec& x, int t, double scale, Vec& g, Mat& H) const {
  return -term->expand(x, t, -scale, g, H);
}

double TimeWindow::value(const Vec& x, int t) const {
  return active(t) ? term->value(x, t)
                   : -std::numeric_limits<double>::infinity();
}

double TimeWindow::expand(const Vec& x, int t, double scale, Vec& g,
                          Mat& H) const {
  return active(t) ? term->expand(x, t, scale, g, H)
                   : -std::numeric_limits<double>::infinity();
}

}  // namespace margin_nodes

namespace mn = margin_nodes;

MarginFn::MarginFn(mn::NodePtr node, MarginKind kind, std::string name)
    : node_(std::move(node)), kind_(kind), name_(std::move(name)) {
  if (!node_) throw std::invalid_argument("margin function needs a node");
}

MarginExpansion MarginFn::expand(const Vec& x, int t) const {
  MarginExpansion e;
  e.gradient = Vec::Zero(x.size());
  e.hessian = Mat::Zero(x.size(), x.size());
  e.value = node_->expand(x, t, 1.0, e.gradient, e.hessian);
  return e;
}

MarginFn disk_target(const Eigen::Vector2d& center, double radius,
                     PositionIndex position) {
  if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be > 0");
  return {std::make_shared<mn::Disk>(center, radius, position, 1.0),
          MarginKind::kTarget, "disk_target"};
}

MarginFn disk_failure(const Eigen::Vector2d& center, double radius,
                      PositionIndex position) {
  if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be > 0");
  return {std::make_shared<mn::Disk>(center, radius, position, -1.0),
          MarginKind::kFailure, "disk_failure"};
}

MarginFn halfplane_failure(const Eigen::Vector2d& normal, double offset,
                           PositionIndex position) {
  if (std::abs(normal.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("half-plane normal must be a unit vector");
  return {std::make_shared<mn::HalfPlane>(normal, offset, position),
          MarginKind::kFailure, "halfplane_failure"};
}

MarginFn pairwise_distance_failure(PositionIndex first, PositionIndex second,
                                   double clearance) {
  if (!(clearance > 0.0)) throw std::invalid_argument("clearance must be > 0");
  return {std::make_shared<mn::PairwiseDistance>(first, second, clearance),
          MarginKind::kFailure, "pairwise_distance_failure"};
}

MarginFn box_interval_failure(int index, double lower, double upper) {
  if (!(lower < upper)) throw std::invalid_argument("interval needs lower < upper");
  return {std::make_shared<mn::Interval>(index, lower, upper),
          MarginKind::kFailure, "box_interval_failure"};
}

namespace {
void check_box(const Eigen::Vector2d& lower, const Eigen::Vector2d& upper) {
  if (!(lower.x() < upper.x() && lower.y() < upper.y()))
    throw std::invalid_argument("box needs lower < upper in both axes");
}
}  // namespace

MarginFn box_target(const Eigen::Vector2d& lower, const Eigen::Vector2d& upper,
                    PositionIndex position) {
  check_box(lower, upper);
  return {std::make_shared<mn::Box>(lower, upper, position),
          MarginKind::kTarget, "box_target"};
}

MarginFn box_exit_failure(const Eigen::Vector2d& lower,
                          const Eigen::Vector2d& upper, PositionIndex position) {
  check_box(lower, upper);
  return {std::make_shared<mn::Box>(lower, upper, position),
          MarginKind::kFailure, "box_exit_failure"};
}

MarginFn affine_margin(const Vec& a, double b, MarginKind kind) {
  return {std::make_shared<mn::Quadratic>(Mat::Zero(a.size(), a.size()), a, b),
          kind, "affine"};
}

MarginFn quadratic_margin(const Mat& M, const Vec& a, double b,
                          MarginKind kind) {
  if (M.rows() != M.cols() || M.rows() != a.size())
    throw DimensionError("quadratic margin dimension mismatch");
  return {std::make_shared<mn::Quadratic>(0.5 * (M + M.transpose()), a, b),
          kind, "quadratic"};
}

MarginFn constant_margin(int state_dim, double c, MarginKind kind) {
  return {std::make_shared<mn::Quadratic>(Mat::Zero(state_dim, state_dim),
                                          Vec::Zero(state_dim), c),
          kind, "constant"};
}

MarginFn time_table_margin(std::vector<double> values, MarginKind kind) {
  return {std::make_shared<mn::TimeTable>(std::move(values)), kind,
          "time_table"};
}

namespace {
MarginFn combine(const std::vector<MarginFn>& terms, bool is_max,
                 std::string name) {
  if (terms.empty()) throw std::invalid_argument("cannot combine zero margins");
  if (terms.size() == 1) {
    return name.empty() ? terms[0] : terms[0].renamed(std::move(name));
  }
  std::vector<mn::NodePtr> nodes;
  for (const auto& m : terms) nodes.push_back(m.node());
  if (name.empty()) name = is_max ? "max" : "min";
  return {std::make_shared<mn::Extremum>(std::move(nodes), is_max),
          terms[0].kind(), std::move(name)};
}
}  // namespace

MarginFn combine_max(const std::vector<MarginFn>& terms, std::string name) {
  return combine(terms, true, std::move(name));
}

MarginFn combine_min(const std::vector<MarginFn>& terms, std::string name) {
  return combine(terms, false, std::move(name));
}

MarginFn negate(const MarginFn& m) {
  const MarginKind flipped = m.kind() == MarginKind::kTarget
                                 ? MarginKind::kFailure
                                 : MarginKind::kTarget;
  return {std::make_shared<mn::Negate>(m.node()), flipped, "-" + m.name()};
}

MarginFn time_window(const MarginFn& m, int first_step, int last_step) {
  return {std::make_shared<mn::TimeWindow>(m.node(), first_step, last_step),
          m.kind(), m.name()};
}

Mat project_psd(const Mat& H, double regularization) {
  if (H.isZero(0.0)) {
    return regularization * Mat::Identity(H.rows(), H.cols());
  }
  const Mat sym = 0.5 * (H + H.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym);
  const Vec clamped = eig.eigenvalues().cwiseMax(0.0);
  Mat P = eig.eigenvectors() * clamped.asDiagonal() *
          eig.eigenvectors().transpose();
  P = 0.5 * (P + P.transpose());
  P.diagonal().array() += regularization;
  return P;
}

Quadratization quadratize(const MarginFn& m, const Vec& xbar, int t,
                          double regularization) {
  const MarginExpansion e = m.expand(xbar, t);
  Quadratization out;
  out.Q = project_psd(e.hessian, regularization);
  out.q = e.gradient - out.Q * xbar;
  out.c = e.value - out.q.dot(xbar) - 0.5 * xbar.dot(out.Q * xbar);
  return out;
}

}  // namespace ilqra
