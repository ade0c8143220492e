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

// Predictor interface plus the in-process baselines. A predictor plays the role of the
// controller in the closed loop: it sees an observation window and returns either future
// positions or per-frame kinematic controls for the next `horizon` frames.

#ifndef REACSIM__PREDICTORS_HPP_
#define REACSIM__PREDICTORS_HPP_

#include "reacsim/core_types.hpp"
#include "reacsim/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace reacsim
{

enum class OutputKind { positions, bicycle_controls, particle_controls };

inline const char * to_string(OutputKind k)
{
  switch (k) {
    case OutputKind::positions:
      return "positions";
    case OutputKind::bicycle_controls:
      return "bicycle_controls";
    case OutputKind::particle_controls:
      return "particle_controls";
  }
  return "?";
}

inline OutputKind parse_output_kind(const std::string & s)
{
  for (auto k :
       {OutputKind::positions, OutputKind::bicycle_controls, OutputKind::particle_controls}) {
    if (s == to_string(k)) {
      return k;
    }
  }
  throw DomainError("unknown output kind '" + s + "'");
}

/// What a predictor sees at one iteration.
struct ObservationWindow
{
  /// Last t_obs frames of the simulated agent, oldest first; back() is the current frame.
  Trajectory target_history;
  /// Neighbor states inside the window and within the observable radius.
  std::map<std::string, Trajectory> neighbor_histories;
  /// Non-owning; null when the scenario has no map.
  const MapData * map{nullptr};
  double dt{kDefaultDt};

  FrameIndex current_frame() const { return target_history.end_frame() - 1; }
  const AgentState & current() const { return target_history.back(); }
};

/// Exactly one payload is filled, matching `kind`. Positions cover the `horizon` frames after
/// the current frame.
struct PredictionOutput
{
  OutputKind kind{OutputKind::positions};
  PlanarTrace positions;
  std::vector<BicycleControl> bicycle;
  std::vector<ParticleControl> particle;

  std::size_t length() const
  {
    switch (kind) {
      case OutputKind::positions:
        return positions.size();
      case OutputKind::bicycle_controls:
        return bicycle.size();
      case OutputKind::particle_controls:
        return particle.size();
    }
    return 0;
  }
};

/// Throws DomainError unless the payload matches `kind`, has `horizon` entries and is finite.
inline void validate(const PredictionOutput & out, std::size_t horizon)
{
  const bool pos = out.kind == OutputKind::positions;
  const bool bic = out.kind == OutputKind::bicycle_controls;
  const bool par = out.kind == OutputKind::particle_controls;
  if (
    (!pos && !out.positions.empty()) || (!bic && !out.bicycle.empty()) ||
    (!par && !out.particle.empty())) {
    throw DomainError("prediction carries a payload that does not match its kind");
  }
  if (out.length() != horizon) {
    throw DomainError(
      "prediction has " + std::to_string(out.length()) + " entries, expected " +
      std::to_string(horizon));
  }
  auto finite = [](double a, double b) { return std::isfinite(a) && std::isfinite(b); };
  for (const auto & p : out.positions.points) {
    if (!finite(p.x, p.y)) throw DomainError("prediction contains non-finite positions");
  }
  for (const auto & u : out.bicycle) {
    if (!finite(u.a, u.beta)) throw DomainError("prediction contains non-finite controls");
  }
  for (const auto & u : out.particle) {
    if (!finite(u.ax, u.ay)) throw DomainError("prediction contains non-finite controls");
  }
}

/// Shared knobs for the baselines.
struct PredictorSettings
{
  int horizon{30};
  double dt{kDefaultDt};
  KinematicLimits limits{};
  GeometryPolicy geometry_policy{GeometryPolicy::fixed_ratio};
  double lr_ratio{0.5};
};

class Predictor
{
public:
  virtual ~Predictor() = default;
  virtual OutputKind output_kind() const = 0;
  virtual std::string name() const = 0;
  virtual PredictionOutput predict(const ObservationWindow & obs) = 0;
};

using PredictorPtr = std::unique_ptr<Predictor>;

/// Zero-acceleration extrapolation of the current pose.
class ConstantVelocityPredictor : public Predictor
{
public:
  explicit ConstantVelocityPredictor(PredictorSettings s = {}) : s_(s) {}

  OutputKind output_kind() const override { return OutputKind::positions; }
  std::string name() const override { return "constant_velocity"; }

  PredictionOutput predict(const ObservationWindow & obs) override
  {
    const AgentState & cur = obs.current();
    const double vx = cur.v * std::cos(cur.psi);
    const double vy = cur.v * std::sin(cur.psi);
    PredictionOutput out;
    out.kind = OutputKind::positions;
    out.positions = PlanarTrace{obs.current_frame() + 1, obs.dt, {}};
    out.positions.points.reserve(static_cast<std::size_t>(s_.horizon));
    for (int k = 1; k <= s_.horizon; ++k) {
      const double t = k * obs.dt;
      out.positions.points.push_back({cur.x + vx * t, cur.y + vy * t});
    }
    return out;
  }

private:
  PredictorSettings s_;
};

/// Fits one control from the last three history frames and holds it over the horizon.
/// Bicycle head: a from the speed change, beta from the yaw rate. Particle head: (ax, ay) from
/// the change of the velocity vector.
class ConstantControlPredictor : public Predictor
{
public:
  ConstantControlPredictor(OutputKind kind, PredictorSettings s = {}) : kind_(kind), s_(s)
  {
    if (kind == OutputKind::positions) {
      throw DomainError("constant_control needs a control head");
    }
  }

  OutputKind output_kind() const override { return kind_; }
  std::string name() const override { return "constant_control"; }

  PredictionOutput predict(const ObservationWindow & obs) override
  {
    const auto & h = obs.target_history;
    if (h.size() < 3) {
      throw DomainError("constant_control: needs at least 3 history frames");
    }
    const AgentState & s0 = h.states[h.size() - 3];
    const AgentState & s2 = h.states[h.size() - 1];
    const double span = 2.0 * h.dt;
    PredictionOutput out;
    out.kind = kind_;
    const auto n = static_cast<std::size_t>(s_.horizon);
    if (kind_ == OutputKind::bicycle_controls) {
      const auto geom = estimate_geometry(h, s2.length, s_.geometry_policy, s_.lr_ratio);
      BicycleControl u{(s2.v - s0.v) / span, 0.0};
      if (std::abs(s2.v) > 1e-6) {
        const double yaw_rate = wrap_angle(s2.psi - s0.psi) / span;
        u.beta = std::asin(std::clamp(yaw_rate * geom.l_r / s2.v, -1.0, 1.0));
      }
      out.bicycle.assign(n, clamp(u, s_.limits));
    } else {
      const ParticleState p0 = to_particle(s0);
      const ParticleState p2 = to_particle(s2);
      const ParticleControl u{(p2.vx - p0.vx) / span, (p2.vy - p0.vy) / span};
      out.particle.assign(n, clamp(u, s_.limits));
    }
    return out;
  }

private:
  OutputKind kind_;
  PredictorSettings s_;
};

/// Projects onto the nearest centerline and advances along it at the current speed.
class LaneFollowPredictor : public Predictor
{
public:
  explicit LaneFollowPredictor(PredictorSettings s = {}) : s_(s) {}

  OutputKind output_kind() const override { return OutputKind::positions; }
  std::string name() const override { return "lane_follow"; }

  PredictionOutput predict(const ObservationWindow & obs) override
  {
    if (obs.map == nullptr) {
      throw DomainError("lane_follow: observation has no map");
    }
    const Polyline * best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    const Point2 p = obs.current().position();
    for (const auto & pl : obs.map->polylines) {
      if (pl.kind != PolylineKind::centerline || pl.points.size() < 2) {
        continue;
      }
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < pl.points.size(); ++i) {
        const Point2 & a = pl.points[i];
        const Point2 & b = pl.points[i + 1];
        const double len = distance(a, b);
        double u = 0.0;
        if (len > 0.0) {
          u = std::clamp(((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / (len * len),
                         0.0, 1.0);
        }
        const Point2 q{a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
        const double d = distance(p, q);
        if (d < best_d) {
          best_d = d;
          best = &pl;
          best_s = acc + u * len;
        }
        acc += len;
      }
    }
    if (best == nullptr) {
      throw DomainError("lane_follow: map has no centerline");
    }
    PredictionOutput out;
    out.kind = OutputKind::positions;
    out.positions = PlanarTrace{obs.current_frame() + 1, obs.dt, {}};
    const double speed = std::abs(obs.current().v);
    for (int k = 1; k <= s_.horizon; ++k) {
      out.positions.points.push_back(point_at(*best, best_s + speed * k * obs.dt));
    }
    return out;
  }

private:
  static Point2 point_at(const Polyline & pl, double s)
  {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pl.points.size(); ++i) {
      const Point2 & a = pl.points[i];
      const Point2 & b = pl.points[i + 1];
      const double len = distance(a, b);
      const bool last = i + 2 == pl.points.size();
      if ((s <= acc + len || last) && len > 0.0) {
        const double u = (s - acc) / len;  // > 1 extrapolates past the end
        return {a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
      }
      acc += len;
    }
    return pl.points.back();
  }

  PredictorSettings s_;
};

/// Returns the logged future of the simulated agent; frames past the end of the log continue at
/// constant velocity. Control heads re-encode the logged future into controls starting from the
/// observation's current state.
class OracleReplayPredictor : public Predictor
{
public:
  OracleReplayPredictor(Trajectory log, OutputKind kind, PredictorSettings s = {})
  : log_(std::move(log)), kind_(kind), s_(s)
  {
    validate(log_);
  }

  OutputKind output_kind() const override { return kind_; }
  std::string name() const override { return "oracle_replay"; }

  PredictionOutput predict(const ObservationWindow & obs) override
  {
    const FrameIndex first = obs.current_frame() + 1;
    Trajectory future{first, obs.dt, {}};
    for (int k = 0; k < s_.horizon; ++k) {
      future.states.push_back(state_at(first + k));
    }
    PredictionOutput out;
    out.kind = kind_;
    switch (kind_) {
      case OutputKind::positions:
        out.positions = positions_of(future);
        break;
      case OutputKind::bicycle_controls: {
        Trajectory joined{first - 1, obs.dt, {obs.current()}};
        joined.states.insert(joined.states.end(), future.states.begin(), future.states.end());
        const auto geom =
          estimate_geometry(obs.target_history, obs.current().length, s_.geometry_policy,
                            s_.lr_ratio);
        out.bicycle = recover_bicycle_controls(joined, geom);
        break;
      }
      case OutputKind::particle_controls: {
        const auto pts = positions_of(future).points;
        out.particle = recover_particle_controls(obs.current(), pts, obs.dt);
        break;
      }
    }
    return out;
  }

private:
  AgentState state_at(FrameIndex f) const
  {
    if (log_.contains(f)) {
      return log_.at_frame(f);
    }
    if (f < log_.start_frame) {
      return log_.states.front();
    }
    AgentState s = log_.back();
    const double t = static_cast<double>(f - (log_.end_frame() - 1)) * log_.dt;
    s.x += s.v * std::cos(s.psi) * t;
    s.y += s.v * std::sin(s.psi) * t;
    return s;
  }

  Trajectory log_;
  OutputKind kind_;
  PredictorSettings s_;
};

/// Adds zero-mean uniform noise to another predictor's output. Position heads get
/// U(-amplitude, amplitude) per coordinate in meters; control heads get the same amplitude in
/// m/s^2 on accelerations and `beta_scale * amplitude` radians on slip angles.
class NoisyPredictor : public Predictor
{
public:
  NoisyPredictor(PredictorPtr inner, double amplitude, std::uint64_t seed, double beta_scale = 0.1)
  : inner_(std::move(inner)), amplitude_(amplitude), beta_scale_(beta_scale), rng_(seed)
  {
    if (!inner_) {
      throw DomainError("noisy wrapper needs an inner predictor");
    }
    if (!(amplitude >= 0.0)) {
      throw DomainError("noise amplitude must be non-negative");
    }
  }

  OutputKind output_kind() const override { return inner_->output_kind(); }
  std::string name() const override { return "noisy(" + inner_->name() + ")"; }

  PredictionOutput predict(const ObservationWindow & obs) override
  {
    PredictionOutput out = inner_->predict(obs);
    // Explicit 53-bit draw: std::uniform_real_distribution differs across standard libraries.
    auto draw = [&]() {
      const double r = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
      return amplitude_ * (2.0 * r - 1.0);
    };
    for (auto & p : out.positions.points) {
      p.x += draw();
      p.y += draw();
    }
    for (auto & c : out.bicycle) {
      c.a += draw();
      c.beta += beta_scale_ * draw();
    }
    for (auto & c : out.particle) {
      c.ax += draw();
      c.ay += draw();
    }
    return out;
  }

private:
  PredictorPtr inner_;
  double amplitude_;
  double beta_scale_;
  std::mt19937_64 rng_;
};

}  // namespace reacsim

#endif  // REACSIM__PREDICTORS_HPP_
