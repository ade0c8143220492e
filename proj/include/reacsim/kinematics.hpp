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

// Kinematic decoding layers: per-frame controls are rolled out into states, either through the
// kinematic bicycle model (acceleration + slip angle) or a point-mass model (ax, ay).
// None of the parameters here are learned.

#ifndef REACSIM__KINEMATICS_HPP_
#define REACSIM__KINEMATICS_HPP_

#include "reacsim/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace reacsim
{

struct BicycleControl
{
  double a{0.0};
  double beta{0.0};

  friend bool operator==(const BicycleControl &, const BicycleControl &) = default;
};

struct ParticleControl
{
  double ax{0.0};
  double ay{0.0};

  friend bool operator==(const ParticleControl &, const ParticleControl &) = default;
};

struct KinematicLimits
{
  double a_max{8.0};
  double beta_max{0.6};
};

inline BicycleControl clamp(const BicycleControl & u, const KinematicLimits & lim)
{
  return {std::clamp(u.a, -lim.a_max, lim.a_max), std::clamp(u.beta, -lim.beta_max, lim.beta_max)};
}

inline ParticleControl clamp(const ParticleControl & u, const KinematicLimits & lim)
{
  return {std::clamp(u.ax, -lim.a_max, lim.a_max), std::clamp(u.ay, -lim.a_max, lim.a_max)};
}

/// Distances from the center of mass to the rear (l_r) and front (l_f) axle.
struct BicycleGeometry
{
  double l_r{2.0};
  double l_f{2.0};

  static BicycleGeometry from_vehicle(double vehicle_length, double rear_ratio)
  {
    if (!(vehicle_length > 0.0) || !(rear_ratio > 0.0) || !(rear_ratio < 1.0)) {
      throw DomainError("BicycleGeometry: need length > 0 and rear ratio in (0, 1)");
    }
    const double l_r = rear_ratio * vehicle_length;
    return {l_r, vehicle_length - l_r};
  }
};

namespace detail
{
inline void check_geometry(const BicycleGeometry & g)
{
  if (!(g.l_r > 0.0) || !(g.l_f >= 0.0) || !std::isfinite(g.l_r) || !std::isfinite(g.l_f)) {
    throw DomainError("BicycleGeometry: need l_r > 0 and l_f >= 0");
  }
}

inline void check_dt(double dt)
{
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError("time step must be positive and finite");
  }
}
}  // namespace detail

/// One forward-Euler step of the kinematic bicycle model.
inline AgentState bicycle_step(
  const AgentState & state, const BicycleControl & u, const BicycleGeometry & geom, double dt)
{
  detail::check_dt(dt);
  detail::check_geometry(geom);
  AgentState next = state;
  const double course = state.psi + u.beta;
  next.x = state.x + state.v * std::cos(course) * dt;
  next.y = state.y + state.v * std::sin(course) * dt;
  const double dpsi = (state.v / geom.l_r) * std::sin(u.beta) * dt;
  const double dv = u.a * dt;
  double psi = state.psi + dpsi;
  double v = state.v + dv;
  if (!std::isfinite(next.x) || !std::isfinite(next.y) || !std::isfinite(psi) || !std::isfinite(v)) {
    throw NumericError("bicycle_step: non-finite state");
  }
  // Rounding of the sums must not make the realized increments exceed the commanded ones.
  // The heading check uses the wrapped difference, which also rounds across +-pi.
  next.psi = wrap_angle(psi);
  for (int i = 0; i < 64 && std::abs(wrap_angle(next.psi - state.psi)) > std::abs(dpsi); ++i) {
    psi = std::nextafter(psi, state.psi);
    next.psi = wrap_angle(psi);
  }
  while (std::abs(v - state.v) > std::abs(dv)) v = std::nextafter(v, state.v);
  next.v = v;
  return next;
}

/// Rolls `controls` out from `initial`. Output has controls.size() + 1 states, the first being
/// `initial` at `start_frame`.
inline Trajectory bicycle_rollout(
  const AgentState & initial, std::span<const BicycleControl> controls,
  const BicycleGeometry & geom, double dt, FrameIndex start_frame = 0)
{
  if (controls.empty()) {
    throw DomainError("bicycle_rollout: empty control sequence");
  }
  Trajectory out{start_frame, dt, {}};
  out.states.reserve(controls.size() + 1);
  out.states.push_back(initial);
  for (std::size_t i = 0; i < controls.size(); ++i) {
    try {
      out.states.push_back(bicycle_step(out.states.back(), controls[i], geom, dt));
    } catch (const NumericError & e) {
      throw NumericError("bicycle_rollout step " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

struct ParticleState
{
  double x{0.0};
  double y{0.0};
  double vx{0.0};
  double vy{0.0};

  friend bool operator==(const ParticleState &, const ParticleState &) = default;
};

/// Exact constant-acceleration update of a point mass.
inline ParticleState particle_step(const ParticleState & s, const ParticleControl & u, double dt)
{
  detail::check_dt(dt);
  const ParticleState next{
    s.x + s.vx * dt + 0.5 * u.ax * dt * dt, s.y + s.vy * dt + 0.5 * u.ay * dt * dt,
    s.vx + u.ax * dt, s.vy + u.ay * dt};
  if (
    !std::isfinite(next.x) || !std::isfinite(next.y) || !std::isfinite(next.vx) ||
    !std::isfinite(next.vy)) {
    throw NumericError("particle_step: non-finite state");
  }
  return next;
}

inline ParticleState to_particle(const AgentState & s)
{
  return {s.x, s.y, s.v * std::cos(s.psi), s.v * std::sin(s.psi)};
}

/// Point-mass rollout. Speed is |velocity|; heading is the provisional atan2(vy, vx), held from
/// the previous frame while the velocity vector is exactly zero. Callers that need a smooth
/// heading re-derive it from the positions.
inline Trajectory particle_rollout(
  const AgentState & initial, std::span<const ParticleControl> controls, double dt,
  FrameIndex start_frame = 0)
{
  if (controls.empty()) {
    throw DomainError("particle_rollout: empty control sequence");
  }
  Trajectory out{start_frame, dt, {}};
  out.states.reserve(controls.size() + 1);
  out.states.push_back(initial);
  const ParticleState p0 = to_particle(initial);
  ParticleState p = p0;
  for (std::size_t i = 0; i < controls.size(); ++i) {
    try {
      p = particle_step(p, controls[i], dt);
    } catch (const NumericError & e) {
      throw NumericError("particle_rollout step " + std::to_string(i) + ": " + e.what());
    }
    AgentState s = out.states.back();
    s.x = p.x;
    s.y = p.y;
    // While the velocity vector is unchanged the initial speed and heading carry over as-is,
    // so zero acceleration conserves them exactly.
    if (p.vx != p0.vx || p.vy != p0.vy) {
      s.v = std::hypot(p.vx, p.vy);
      if (p.vx != 0.0 || p.vy != 0.0) {
        s.psi = wrap_angle(std::atan2(p.vy, p.vx));
      }
    }
    out.states.push_back(s);
  }
  return out;
}

/// Slip angle of the center of mass for a front steering angle gamma.
inline double beta_from_gamma(double gamma, const BicycleGeometry & geom)
{
  detail::check_geometry(geom);
  if (!std::isfinite(gamma) || std::abs(gamma) >= kPi / 2.0) {
    throw DomainError("beta_from_gamma: |gamma| must be < pi/2");
  }
  return std::atan((geom.l_r / (geom.l_r + geom.l_f)) * std::tan(gamma));
}

/// Inverse of beta_from_gamma.
inline double gamma_from_beta(double beta, const BicycleGeometry & geom)
{
  detail::check_geometry(geom);
  if (!std::isfinite(beta) || std::abs(beta) >= kPi / 2.0) {
    throw DomainError("gamma_from_beta: |beta| must be < pi/2");
  }
  const double t = std::tan(beta) * (geom.l_r + geom.l_f) / geom.l_r;
  if (!std::isfinite(t)) {
    throw DomainError("gamma_from_beta: no inverse for this beta");
  }
  return std::atan(t);
}

enum class GeometryPolicy { fixed_ratio, curvature_fit };

inline GeometryPolicy parse_geometry_policy(const std::string & s)
{
  if (s == "fixed-ratio" || s == "fixed_ratio") {
    return GeometryPolicy::fixed_ratio;
  }
  if (s == "curvature-fit" || s == "curvature_fit") {
    return GeometryPolicy::curvature_fit;
  }
  throw DomainError("unknown geometry policy '" + s + "'");
}

/// Estimate l_r / l_f for a vehicle.
///
/// fixed_ratio: l_r = ratio * length.
/// curvature_fit: least squares on yaw_rate * l_r = v * sin(beta) over consecutive history
/// frames, with beta the angle between the displacement direction and the heading. The fit is
/// clamped to [0.2, 0.8] * length and falls back to fixed_ratio when the history never exceeds
/// 0.5 m/s or carries no measurable yaw rate.
inline BicycleGeometry estimate_geometry(
  const Trajectory & history, double vehicle_length, GeometryPolicy policy, double ratio = 0.5)
{
  if (history.size() < 2) {
    throw DomainError("estimate_geometry: history needs at least 2 frames");
  }
  const auto fallback = BicycleGeometry::from_vehicle(vehicle_length, ratio);
  if (policy == GeometryPolicy::fixed_ratio) {
    return fallback;
  }
  constexpr double kMinSpeed = 0.5;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i + 1 < history.size(); ++i) {
    const auto & s0 = history.states[i];
    const auto & s1 = history.states[i + 1];
    if (std::abs(s0.v) < kMinSpeed) {
      continue;
    }
    const double dx = s1.x - s0.x;
    const double dy = s1.y - s0.y;
    if (std::hypot(dx, dy) < 1e-9) {
      continue;
    }
    double course = std::atan2(dy, dx);
    if (s0.v < 0.0) {
      course += kPi;
    }
    const double beta = wrap_angle(course - s0.psi);
    const double yaw_rate = wrap_angle(s1.psi - s0.psi) / history.dt;
    num += yaw_rate * s0.v * std::sin(beta);
    den += yaw_rate * yaw_rate;
  }
  if (!(den > 1e-12)) {
    return fallback;
  }
  const double l_r = std::clamp(num / den, 0.2 * vehicle_length, 0.8 * vehicle_length);
  if (!std::isfinite(l_r)) {
    return fallback;
  }
  return {l_r, vehicle_length - l_r};
}

/// Re-derives the controls that map consecutive states onto each other under bicycle_step.
/// beta is recovered from the heading increment, so frames with v == 0 yield beta = 0.
inline std::vector<BicycleControl> recover_bicycle_controls(
  const Trajectory & traj, const BicycleGeometry & geom)
{
  detail::check_geometry(geom);
  std::vector<BicycleControl> out;
  if (traj.size() < 2) {
    return out;
  }
  out.reserve(traj.size() - 1);
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const auto & s0 = traj.states[i];
    const auto & s1 = traj.states[i + 1];
    BicycleControl u{(s1.v - s0.v) / traj.dt, 0.0};
    if (s0.v != 0.0) {
      const double sin_beta = wrap_angle(s1.psi - s0.psi) * geom.l_r / (s0.v * traj.dt);
      u.beta = std::asin(std::clamp(sin_beta, -1.0, 1.0));
    }
    out.push_back(u);
  }
  return out;
}

/// Accelerations that reproduce `positions` exactly under particle_step, starting from the
/// velocity of `initial`. positions[0] is the first frame after `initial`.
inline std::vector<ParticleControl> recover_particle_controls(
  const AgentState & initial, std::span<const Point2> positions, double dt)
{
  detail::check_dt(dt);
  std::vector<ParticleControl> out;
  out.reserve(positions.size());
  ParticleState p = to_particle(initial);
  for (const auto & target : positions) {
    const ParticleControl u{
      2.0 * (target.x - p.x - p.vx * dt) / (dt * dt), 2.0 * (target.y - p.y - p.vy * dt) / (dt * dt)};
    out.push_back(u);
    p = particle_step(p, u, dt);
  }
  return out;
}

}  // namespace reacsim

#endif  // REACSIM__KINEMATICS_HPP_
