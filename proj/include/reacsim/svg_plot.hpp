// Copyright 2026 The reacsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Three-panel SVG of one run: x-y trajectory, speed over time, heading over time.
// Simulated (red) vs ground truth (green) vs seeding history (gray), dots every 0.3 s.

#ifndef REACSIM__SVG_PLOT_HPP_
#define REACSIM__SVG_PLOT_HPP_

#include "reacsim/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace reacsim
{

namespace svg
{
struct Series
{
  std::vector<Point2> pts;
  const char * color;
  const char * label;
  bool dashed{false};
};

struct Bounds
{
  double x0{std::numeric_limits<double>::infinity()};
  double x1{-std::numeric_limits<double>::infinity()};
  double y0{std::numeric_limits<double>::infinity()};
  double y1{-std::numeric_limits<double>::infinity()};

  void add(const Point2 & p)
  {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  void pad(bool equal_aspect)
  {
    if (!(x1 >= x0)) *this = Bounds{0, 1, 0, 1};
    if (equal_aspect) {
      const double span = std::max({x1 - x0, y1 - y0, 1e-3});
      const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
      x0 = cx - 0.55 * span;
      x1 = cx + 0.55 * span;
      y0 = cy - 0.55 * span;
      y1 = cy + 0.55 * span;
      return;
    }
    const double sx = std::max(x1 - x0, 1e-3), sy = std::max(y1 - y0, 1e-3);
    x0 -= 0.05 * sx;
    x1 += 0.05 * sx;
    y0 -= 0.1 * sy;
    y1 += 0.1 * sy;
  }
};

inline std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

/// One panel at (ox, oy) of size w x h. `dot_every` draws markers every n-th point.
inline void panel(
  std::ostringstream & out, const std::string & id, const std::string & title,
  const std::string & xlabel, const std::string & ylabel, const std::vector<Series> & series,
  double ox, double oy, double w, double h, bool equal_aspect, std::size_t dot_every)
{
  Bounds b;
  for (const auto & s : series)
    for (const auto & p : s.pts) b.add(p);
  b.pad(equal_aspect);
  const double l = 55, r = 10, t = 25, btm = 35;
  const double pw = w - l - r, ph = h - t - btm;
  auto X = [&](double x) { return ox + l + (x - b.x0) / (b.x1 - b.x0) * pw; };
  auto Y = [&](double y) { return oy + t + (1.0 - (y - b.y0) / (b.y1 - b.y0)) * ph; };

  out << "<g class=\"panel\" id=\"" << id << "\">\n";
  out << "<rect x=\"" << num(ox + l) << "\" y=\"" << num(oy + t) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << num(ox + l + pw / 2) << "\" y=\"" << num(oy + 16)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << title << "</text>\n";
  out << "<text x=\"" << num(ox + l + pw / 2) << "\" y=\"" << num(oy + h - 4)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << xlabel << "</text>\n";
  out << "<text x=\"" << num(ox + 12) << "\" y=\"" << num(oy + t + ph / 2)
      << "\" font-size=\"11\" transform=\"rotate(-90 " << num(ox + 12) << ' '
      << num(oy + t + ph / 2) << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = b.x0 + (b.x1 - b.x0) * i / 4.0;
    const double yv = b.y0 + (b.y1 - b.y0) * i / 4.0;
    out << "<line class=\"tick\" x1=\"" << num(X(xv)) << "\" y1=\"" << num(oy + t + ph)
        << "\" x2=\"" << num(X(xv)) << "\" y2=\"" << num(oy + t + ph + 4)
        << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << num(X(xv)) << "\" y=\"" << num(oy + t + ph + 15)
        << "\" font-size=\"9\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
    out << "<line class=\"tick\" x1=\"" << num(ox + l - 4) << "\" y1=\"" << num(Y(yv))
        << "\" x2=\"" << num(ox + l) << "\" y2=\"" << num(Y(yv)) << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << num(ox + l - 6) << "\" y=\"" << num(Y(yv) + 3)
        << "\" font-size=\"9\" text-anchor=\"end\">" << num(yv) << "</text>\n";
  }
  for (const auto & s : series) {
    if (s.pts.empty()) continue;
    out << "<polyline data-series=\"" << s.label << "\" fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"4 3\"" : "")
        << " points=\"";
    for (const auto & p : s.pts) out << num(X(p.x)) << ',' << num(Y(p.y)) << ' ';
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.pts.size(); i += dot_every) {
      out << "<circle cx=\"" << num(X(s.pts[i].x)) << "\" cy=\"" << num(Y(s.pts[i].y))
          << "\" r=\"2.2\" fill=\"" << s.color << "\"/>\n";
    }
  }
  out << "</g>\n";
}
}  // namespace svg

inline std::string render_result_svg(const SimResult & r)
{
  const double dt = r.simulated.dt > 0 ? r.simulated.dt : kDefaultDt;
  const auto dot_every = static_cast<std::size_t>(std::max<long long>(1, std::llround(0.3 / dt)));
  auto xy = [](const Trajectory & t) {
    std::vector<Point2> p;
    for (const auto & s : t.states) p.push_back(s.position());
    return p;
  };
  auto profile = [](const Trajectory & t, auto field) {
    std::vector<Point2> p;
    for (std::size_t i = 0; i < t.size(); ++i) {
      p.push_back({static_cast<double>(t.start_frame + static_cast<FrameIndex>(i)) * t.dt,
                   field(t.states[i])});
    }
    return p;
  };
  auto speed = [](const AgentState & s) { return s.v; };
  auto heading = [](const AgentState & s) { return s.psi; };
  using svg::Series;
  const std::vector<Series> traj{
    {xy(r.history), "#888888", "history"},
    {xy(r.ground_truth), "#2a9d3a", "ground_truth", true},
    {xy(r.simulated), "#d62728", "simulated"}};
  const std::vector<Series> vel{
    {profile(r.history, speed), "#888888", "history"},
    {profile(r.ground_truth, speed), "#2a9d3a", "ground_truth", true},
    {profile(r.simulated, speed), "#d62728", "simulated"}};
  const std::vector<Series> head{
    {profile(r.history, heading), "#888888", "history"},
    {profile(r.ground_truth, heading), "#2a9d3a", "ground_truth", true},
    {profile(r.simulated, heading), "#d62728", "simulated"}};

  const double w = 380, h = 320;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 3 * w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << 3 * w << ' ' << h << "\">\n";
  out << "<title>" << r.scenario_id << " / " << to_string(r.setting) << "</title>\n";
  svg::panel(out, "trajectory", "trajectory", "x (m)", "y (m)", traj, 0, 0, w, h, true, dot_every);
  svg::panel(out, "velocity", "velocity", "t (s)", "v (m/s)", vel, w, 0, w, h, false, dot_every);
  svg::panel(out, "heading", "heading angle", "t (s)", "psi (rad)", head, 2 * w, 0, w, h, false,
             dot_every);
  out << "</svg>\n";
  return out.str();
}

}  // namespace reacsim

#endif  // REACSIM__SVG_PLOT_HPP_
