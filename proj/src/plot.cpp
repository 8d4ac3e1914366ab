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

#include "ilqra/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace ilqra {
namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#17becf"};

std::string colour(int k) { return kPalette[k % 6]; }

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Bounds {
  double xmin = std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();

  void add(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  bool empty() const { return !(xmin <= xmax && ymin <= ymax); }
};

// World to pixel transform with equal axis scales and y pointing up.
struct View {
  double scale, ox, oy, height;
  double px(double x) const { return ox + scale * x; }
  double py(double y) const { return height - (oy + scale * y); }
};

}  // namespace

std::string render_svg(const std::vector<Trajectory>& trajectories,
                       const std::vector<PositionIndex>& positions,
                       const std::vector<GeometryShape>& geometry,
                       const PlotOptions& options,
                       std::vector<std::string>* warnings) {
  if (geometry.empty() && warnings)
    warnings->push_back("no scenario geometry; plotting without overlays");

  constexpr double kClip = 100.0;
  Bounds b;
  for (const auto& traj : trajectories)
    for (const auto& x : traj.states)
      for (const auto& p : positions)
        if (p.x < x.size() && p.y < x.size()) b.add(x[p.x], x[p.y]);
  for (const auto& g : geometry) {
    if (g.type == GeometryShape::Type::kDisk) {
      b.add(g.a.x() - g.scalar, g.a.y() - g.scalar);
      b.add(g.a.x() + g.scalar, g.a.y() + g.scalar);
    }
  }
  if (b.empty()) {
    for (const auto& g : geometry) {
      if (g.type == GeometryShape::Type::kBox) {
        b.add(std::max(g.a.x(), -kClip), std::max(g.a.y(), -kClip));
        b.add(std::min(g.b.x(), kClip), std::min(g.b.y(), kClip));
      }
    }
  }
  if (b.empty()) {
    b.add(-10, -10);
    b.add(10, 10);
  }
  const double pad =
      0.08 * std::max({b.xmax - b.xmin, b.ymax - b.ymin, 1.0});
  b.xmin -= pad, b.xmax += pad, b.ymin -= pad, b.ymax += pad;

  const double W = options.width, H = options.height;
  const double scale =
      std::min(W / (b.xmax - b.xmin), H / (b.ymax - b.ymin));
  const View v{scale, 0.5 * (W - scale * (b.xmax + b.xmin)),
               0.5 * (H - scale * (b.ymax + b.ymin)), H};

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
      << "\" height=\"" << options.height << "\" viewBox=\"0 0 "
      << options.width << " " << options.height << "\">\n"
      << "<defs><clipPath id=\"area\"><rect x=\"0\" y=\"0\" width=\""
      << options.width << "\" height=\"" << options.height
      << "\"/></clipPath></defs>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\""
      << options.height << "\" fill=\"white\"/>\n"
      << "<g clip-path=\"url(#area)\">\n";

  auto rect = [&](const Eigen::Vector2d& lo, const Eigen::Vector2d& hi,
                  const std::string& style) {
    const double x0 = std::max(lo.x(), b.xmin - pad);
    const double x1 = std::min(hi.x(), b.xmax + pad);
    const double y0 = std::max(lo.y(), b.ymin - pad);
    const double y1 = std::min(hi.y(), b.ymax + pad);
    if (x0 >= x1 || y0 >= y1) return;
    svg << "<rect x=\"" << num(v.px(x0)) << "\" y=\"" << num(v.py(y1))
        << "\" width=\"" << num(scale * (x1 - x0)) << "\" height=\""
        << num(scale * (y1 - y0)) << "\" " << style << "/>\n";
  };

  // Drivable areas first, then targets, then obstacles.
  for (const auto& g : geometry)
    if (g.type == GeometryShape::Type::kBox && g.kind == MarginKind::kFailure)
      rect(g.a, g.b, "fill=\"#ececec\" stroke=\"#9a9a9a\" stroke-width=\"1\"");
  for (const auto& g : geometry) {
    if (g.kind != MarginKind::kTarget) continue;
    const std::string c = colour(g.player);
    const std::string style = "fill=\"" + c + "\" fill-opacity=\"0.18\" stroke=\"" +
                              c + "\" stroke-width=\"1.5\"";
    if (g.type == GeometryShape::Type::kBox) {
      rect(g.a, g.b, style);
    } else if (g.type == GeometryShape::Type::kDisk) {
      svg << "<circle cx=\"" << num(v.px(g.a.x())) << "\" cy=\""
          << num(v.py(g.a.y())) << "\" r=\"" << num(scale * g.scalar) << "\" "
          << style << "/>\n";
    }
  }
  for (const auto& g : geometry) {
    if (g.kind != MarginKind::kFailure) continue;
    if (g.type == GeometryShape::Type::kDisk) {
      svg << "<circle cx=\"" << num(v.px(g.a.x())) << "\" cy=\""
          << num(v.py(g.a.y())) << "\" r=\"" << num(scale * g.scalar)
          << "\" fill=\"#222222\"/>\n";
    } else if (g.type == GeometryShape::Type::kHalfPlane) {
      const Eigen::Vector2d p0 = g.a * g.scalar;
      const Eigen::Vector2d d(-g.a.y(), g.a.x());
      const double L = 4.0 * std::max(b.xmax - b.xmin, b.ymax - b.ymin) +
                       p0.norm();
      const Eigen::Vector2d p1 = p0 - L * d, p2 = p0 + L * d;
      svg << "<line x1=\"" << num(v.px(p1.x())) << "\" y1=\""
          << num(v.py(p1.y())) << "\" x2=\"" << num(v.px(p2.x()))
          << "\" y2=\"" << num(v.py(p2.y()))
          << "\" stroke=\"#555555\" stroke-width=\"2\"/>\n";
    }
  }

  const double opacity = trajectories.size() > 10 ? 0.35 : 0.9;
  for (const auto& traj : trajectories) {
    for (size_t a = 0; a < positions.size(); ++a) {
      const PositionIndex& p = positions[a];
      svg << "<polyline fill=\"none\" stroke=\"" << colour(a)
          << "\" stroke-opacity=\"" << opacity
          << "\" stroke-width=\"1.5\" points=\"";
      for (size_t t = 0; t < traj.states.size(); ++t) {
        const Vec& x = traj.states[t];
        if (p.x >= x.size() || p.y >= x.size()) break;
        svg << (t ? " " : "") << num(v.px(x[p.x])) << "," << num(v.py(x[p.y]));
      }
      svg << "\"/>\n";
      if (!traj.states.empty() && p.y < traj.states.front().size()) {
        const Vec& x0 = traj.states.front();
        svg << "<circle cx=\"" << num(v.px(x0[p.x])) << "\" cy=\""
            << num(v.py(x0[p.y])) << "\" r=\"3\" fill=\"" << colour(a)
            << "\"/>\n";
      }
    }
  }

  if (options.close_approach_distance > 0.0) {
    const int limit =
        std::min<int>(options.annotate_limit, trajectories.size());
    for (int k = 0; k < limit; ++k) {
      const Trajectory& traj = trajectories[k];
      for (size_t a = 0; a < positions.size(); ++a) {
        for (size_t c = a + 1; c < positions.size(); ++c) {
          double best = std::numeric_limits<double>::infinity();
          size_t when = 0;
          for (size_t t = 0; t < traj.states.size(); ++t) {
            const Vec& x = traj.states[t];
            const double d = (positions[a].extract(x) - positions[c].extract(x)).norm();
            if (d < best) best = d, when = t;
          }
          if (!(best < options.close_approach_distance)) continue;
          const Vec& x = traj.states[when];
          const Eigen::Vector2d pa = positions[a].extract(x);
          const Eigen::Vector2d pc = positions[c].extract(x);
          svg << "<line x1=\"" << num(v.px(pa.x())) << "\" y1=\""
              << num(v.py(pa.y())) << "\" x2=\"" << num(v.px(pc.x()))
              << "\" y2=\"" << num(v.py(pc.y()))
              << "\" stroke=\"#000000\" stroke-dasharray=\"4 3\""
                 " stroke-width=\"1\"/>\n";
          const Eigen::Vector2d mid = 0.5 * (pa + pc);
          svg << "<text x=\"" << num(v.px(mid.x()) + 4) << "\" y=\""
              << num(v.py(mid.y()) - 4)
              << "\" font-family=\"sans-serif\" font-size=\"11\">t="
              << num(when * traj.dt) << "s</text>\n";
        }
      }
    }
  }
  svg << "</g>\n";

  if (!options.title.empty())
    svg << "<text x=\"10\" y=\"20\" font-family=\"sans-serif\" "
           "font-size=\"14\">"
        << escape(options.title) << "</text>\n";
  for (size_t a = 0; a < positions.size(); ++a) {
    const double y = 40 + 16 * static_cast<double>(a);
    svg << "<rect x=\"10\" y=\"" << num(y - 9) << "\" width=\"10\" height=\"10\" fill=\""
        << colour(a) << "\"/><text x=\"26\" y=\"" << num(y)
        << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << escape(a < options.labels.size() ? options.labels[a]
                                            : "agent " + std::to_string(a))
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ilqra
