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

#ifndef REACSIM__CORE_TYPES_HPP_
#define REACSIM__CORE_TYPES_HPP_

#include "reacsim/errors.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace reacsim
{

using FrameIndex = std::int64_t;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDefaultDt = 0.1;

/// Wrap an angle into (-pi, pi]. Throws DomainError on NaN/Inf.
inline double wrap_angle(double theta)
{
  if (!std::isfinite(theta)) {
    throw DomainError("wrap_angle: non-finite input");
  }
  double r = std::remainder(theta, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) {
    r += kTwoPi;
  }
  return r;
}

struct Point2
{
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point2 &, const Point2 &) = default;
};

inline double distance(const Point2 & a, const Point2 & b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Pose, speed and footprint of one agent at one frame.
/// Heading is CCW-positive from +x; speed is signed along the heading.
struct AgentState
{
  double x{0.0};
  double y{0.0};
  double psi{0.0};
  double v{0.0};
  double length{4.0};
  double width{2.0};

  Point2 position() const noexcept { return {x, y}; }

  friend bool operator==(const AgentState &, const AgentState &) = default;
};

inline bool is_valid(const AgentState & s)
{
  const bool finite = std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.psi) &&
                      std::isfinite(s.v) && std::isfinite(s.length) && std::isfinite(s.width);
  return finite && s.length > 0.0 && s.width > 0.0 && s.psi > -kPi && s.psi <= kPi;
}

inline void validate(const AgentState & s)
{
  if (!is_valid(s)) {
    throw DomainError("invalid AgentState (non-finite field, non-positive footprint or unwrapped heading)");
  }
}

/// Frame-indexed sequence of states at a fixed time step. Frame of states[i] is start_frame + i.
struct Trajectory
{
  FrameIndex start_frame{0};
  double dt{kDefaultDt};
  std::vector<AgentState> states;

  std::size_t size() const noexcept { return states.size(); }
  bool empty() const noexcept { return states.empty(); }
  /// One past the last frame.
  FrameIndex end_frame() const noexcept
  {
    return start_frame + static_cast<FrameIndex>(states.size());
  }
  bool contains(FrameIndex f) const noexcept { return f >= start_frame && f < end_frame(); }
  const AgentState & at_frame(FrameIndex f) const
  {
    if (!contains(f)) {
      throw DomainError("frame " + std::to_string(f) + " outside trajectory");
    }
    return states[static_cast<std::size_t>(f - start_frame)];
  }
  const AgentState & back() const { return states.back(); }

  friend bool operator==(const Trajectory &, const Trajectory &) = default;
};

inline void validate(const Trajectory & t)
{
  if (t.states.empty()) {
    throw DomainError("trajectory is empty");
  }
  if (!(t.dt > 0.0) || !std::isfinite(t.dt)) {
    throw DomainError("trajectory dt must be positive");
  }
  for (const auto & s : t.states) {
    validate(s);
  }
}

/// Position-only trajectory; what the smoothing layer blends.
struct PlanarTrace
{
  FrameIndex start_frame{0};
  double dt{kDefaultDt};
  std::vector<Point2> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  FrameIndex end_frame() const noexcept
  {
    return start_frame + static_cast<FrameIndex>(points.size());
  }
  bool contains(FrameIndex f) const noexcept { return f >= start_frame && f < end_frame(); }
  const Point2 & at_frame(FrameIndex f) const
  {
    if (!contains(f)) {
      throw DomainError("frame " + std::to_string(f) + " outside trace");
    }
    return points[static_cast<std::size_t>(f - start_frame)];
  }

  friend bool operator==(const PlanarTrace &, const PlanarTrace &) = default;
};

inline void validate(const PlanarTrace & t)
{
  if (t.points.empty()) {
    throw DomainError("trace is empty");
  }
  if (!(t.dt > 0.0) || !std::isfinite(t.dt)) {
    throw DomainError("trace dt must be positive");
  }
  for (const auto & p : t.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DomainError("trace contains non-finite coordinates");
    }
  }
}

inline PlanarTrace positions_of(const Trajectory & t)
{
  PlanarTrace out{t.start_frame, t.dt, {}};
  out.points.reserve(t.size());
  for (const auto & s : t.states) {
    out.points.push_back(s.position());
  }
  return out;
}

struct OrientedBox
{
  double center_x{0.0};
  double center_y{0.0};
  double heading{0.0};
  double length{4.0};
  double width{2.0};

  /// Corners in CCW order starting front-left.
  std::array<Point2, 4> corners() const
  {
    const double c = std::cos(heading);
    const double s = std::sin(heading);
    const double hl = 0.5 * length;
    const double hw = 0.5 * width;
    const std::array<std::array<double, 2>, 4> local{{{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}}};
    std::array<Point2, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
      out[i] = {center_x + c * local[i][0] - s * local[i][1],
                center_y + s * local[i][0] + c * local[i][1]};
    }
    return out;
  }
};

inline OrientedBox footprint(const AgentState & s)
{
  return OrientedBox{s.x, s.y, s.psi, s.length, s.width};
}

/// Separating-axis test over the two boxes' four edge normals. Closed sets: touching overlaps.
inline bool box_overlap(const OrientedBox & a, const OrientedBox & b)
{
  const std::array<double, 2> ua{std::cos(a.heading), std::sin(a.heading)};
  const std::array<double, 2> va{-ua[1], ua[0]};
  const std::array<double, 2> ub{std::cos(b.heading), std::sin(b.heading)};
  const std::array<double, 2> vb{-ub[1], ub[0]};
  const double dx = b.center_x - a.center_x;
  const double dy = b.center_y - a.center_y;
  const double ahl = 0.5 * a.length, ahw = 0.5 * a.width;
  const double bhl = 0.5 * b.length, bhw = 0.5 * b.width;

  const auto dot = [](const std::array<double, 2> & p, const std::array<double, 2> & q) {
    return p[0] * q[0] + p[1] * q[1];
  };
  for (const auto & axis : {ua, va, ub, vb}) {
    const double dist = std::abs(dx * axis[0] + dy * axis[1]);
    const double ra = ahl * std::abs(dot(ua, axis)) + ahw * std::abs(dot(va, axis));
    const double rb = bhl * std::abs(dot(ub, axis)) + bhw * std::abs(dot(vb, axis));
    if (dist > ra + rb) {
      return false;
    }
  }
  return true;
}

enum class PolylineKind { centerline, boundary };

inline const char * to_string(PolylineKind k)
{
  return k == PolylineKind::centerline ? "centerline" : "boundary";
}

struct Polyline
{
  std::string id;
  PolylineKind kind{PolylineKind::centerline};
  std::vector<Point2> points;

  friend bool operator==(const Polyline &, const Polyline &) = default;
};

struct MapData
{
  std::vector<Polyline> polylines;

  bool empty() const noexcept { return polylines.empty(); }
  friend bool operator==(const MapData &, const MapData &) = default;
};

/// Logged agents plus the one agent the engine drives. Simulation starts at frame t0;
/// frames [t0 - t_obs, t0) of the simulated agent's log seed the history.
struct Scenario
{
  std::string id;
  std::map<std::string, Trajectory> agents;
  std::string simulated_agent;
  FrameIndex t0{0};
  std::optional<MapData> map;

  const Trajectory & simulated_log() const
  {
    const auto it = agents.find(simulated_agent);
    if (it == agents.end()) {
      throw DomainError("scenario " + id + ": simulated agent '" + simulated_agent + "' missing");
    }
    return it->second;
  }

  friend bool operator==(const Scenario &, const Scenario &) = default;
};

/// Checks the scenario invariants for a given observation/simulation window.
inline void validate(const Scenario & sc, int t_obs, int t_sim)
{
  const auto & log = sc.simulated_log();
  validate(log);
  if (!log.contains(sc.t0 - t_obs) || !log.contains(sc.t0 + t_sim - 1)) {
    throw DomainError(
      "scenario " + sc.id + ": simulated agent log does not cover [t0 - t_obs, t0 + t_sim)");
  }
}

}  // namespace reacsim

#endif  // REACSIM__CORE_TYPES_HPP_
