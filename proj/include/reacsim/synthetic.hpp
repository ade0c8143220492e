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

// Synthetic track logs for tests and demos: straight multi-lane roads, constant-speed
// concentric arcs (roundabout-like) and accelerating straight lanes. Lanes are 4 m apart, so
// logged agents never overlap.

#ifndef REACSIM__SYNTHETIC_HPP_
#define REACSIM__SYNTHETIC_HPP_

#include "reacsim/core_types.hpp"
#include "reacsim/data_ingest.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace reacsim
{

struct SyntheticData
{
  std::vector<TrackRecord> records;
  MapData map;
};

struct SyntheticOptions
{
  int cases{20};
  int agents_per_case{3};
  int frames{70};
  double dt{kDefaultDt};
  double lane_spacing{4.0};
  std::uint64_t seed{7};
};

inline SyntheticData generate_synthetic(const SyntheticOptions & opt = {})
{
  SyntheticData out;
  std::mt19937_64 rng(opt.seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  for (int c = 0; c < opt.cases; ++c) {
    const std::string case_id = std::to_string(c + 1);
    const double ox = 400.0 * c;
    const double oy = 0.0;
    const int type = c % 3;
    const double heading = uni(-kPi, kPi);
    const double dx = std::cos(heading), dy = std::sin(heading);
    const double nx = -dy, ny = dx;
    const double phi0 = uni(-kPi, kPi);

    for (int a = 0; a < opt.agents_per_case; ++a) {
      const double lane = opt.lane_spacing * a;
      const double length = uni(4.0, 5.0);
      const double width = uni(1.7, 2.0);
      const double v0 = type == 2 ? uni(4.0, 8.0) : uni(5.0, 12.0);
      const double acc = type == 2 ? uni(0.5, 1.5) : 0.0;
      const double s0 = uni(-10.0, 10.0);
      const double radius = 25.0 + lane;
      const double phi_a = phi0 + uni(-0.3, 0.3);

      for (int k = 0; k < opt.frames; ++k) {
        const double t = k * opt.dt;
        TrackRecord r;
        r.case_id = case_id;
        r.track_id = std::to_string(a + 1);
        r.frame_id = k + 1;
        r.timestamp_ms = static_cast<std::int64_t>(std::llround((k + 1) * opt.dt * 1000.0));
        r.agent_type = "car";
        r.length = length;
        r.width = width;
        if (type == 1) {
          const double phi = phi_a + v0 / radius * t;
          r.x = ox + radius * std::cos(phi);
          r.y = oy + radius * std::sin(phi);
          r.psi_rad = wrap_angle(phi + kPi / 2.0);
          r.vx = -v0 * std::sin(phi);
          r.vy = v0 * std::cos(phi);
        } else {
          const double s = s0 + v0 * t + 0.5 * acc * t * t;
          const double v = v0 + acc * t;
          r.x = ox + lane * nx + s * dx;
          r.y = oy + lane * ny + s * dy;
          r.psi_rad = wrap_angle(heading);
          r.vx = v * dx;
          r.vy = v * dy;
        }
        out.records.push_back(std::move(r));
      }

      Polyline center;
      center.id = "c" + case_id + "_" + std::to_string(a + 1);
      center.kind = PolylineKind::centerline;
      if (type == 1) {
        for (int i = 0; i <= 72; ++i) {
          const double phi = phi0 - 0.5 + i * kTwoPi / 72.0;
          center.points.push_back({ox + radius * std::cos(phi), oy + radius * std::sin(phi)});
        }
      } else {
        for (double s = -60.0; s <= 200.0; s += 10.0) {
          center.points.push_back({ox + lane * nx + s * dx, oy + lane * ny + s * dy});
        }
      }
      out.map.polylines.push_back(std::move(center));
    }
  }
  return out;
}

/// Single-agent scenario driving straight at constant speed. The log holds `frames` frames
/// starting at frame 0; t0 = t_obs.
inline Scenario make_straight_scenario(
  double speed, double heading, int frames = 60, int t_obs = 10, double dt = kDefaultDt,
  Point2 origin = {0.0, 0.0})
{
  Scenario sc;
  sc.id = "straight";
  sc.simulated_agent = "ego";
  sc.t0 = t_obs;
  Trajectory log{0, dt, {}};
  for (int k = 0; k < frames; ++k) {
    const double s = speed * k * dt;
    log.states.push_back(
      {origin.x + s * std::cos(heading), origin.y + s * std::sin(heading), wrap_angle(heading),
       speed, 4.5, 1.8});
  }
  sc.agents["ego"] = std::move(log);
  return sc;
}

}  // namespace reacsim

#endif  // REACSIM__SYNTHETIC_HPP_
