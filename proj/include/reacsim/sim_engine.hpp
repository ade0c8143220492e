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

// Closed-loop simulation: predict, decode through the kinematic layer, optionally smooth,
// commit the first t_update frames, and feed the committed frames back as history.
// One agent is simulated; every other agent replays its log.

#ifndef REACSIM__SIM_ENGINE_HPP_
#define REACSIM__SIM_ENGINE_HPP_

#include "reacsim/core_types.hpp"
#include "reacsim/kinematics.hpp"
#include "reacsim/predictors.hpp"
#include "reacsim/smoothing.hpp"
#include "reacsim/spline.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace reacsim
{

enum class Setting { xy, xy_weighted, kinematic, kinematic_weighted, axay, axay_weighted };

inline constexpr std::array<Setting, 6> kAllSettings{
  Setting::xy,   Setting::xy_weighted,   Setting::kinematic, Setting::kinematic_weighted,
  Setting::axay, Setting::axay_weighted};

inline const char * to_string(Setting s)
{
  switch (s) {
    case Setting::xy:
      return "xy";
    case Setting::xy_weighted:
      return "xy_weighted";
    case Setting::kinematic:
      return "kinematic";
    case Setting::kinematic_weighted:
      return "kinematic_weighted";
    case Setting::axay:
      return "axay";
    case Setting::axay_weighted:
      return "axay_weighted";
  }
  return "?";
}

inline Setting parse_setting(const std::string & s)
{
  for (auto v : kAllSettings) {
    if (s == to_string(v)) {
      return v;
    }
  }
  throw DomainError("unknown setting '" + s + "'");
}

inline bool is_weighted(Setting s)
{
  return s == Setting::xy_weighted || s == Setting::kinematic_weighted ||
         s == Setting::axay_weighted;
}

/// Predictor head each setting consumes.
inline OutputKind required_kind(Setting s)
{
  switch (s) {
    case Setting::xy:
    case Setting::xy_weighted:
      return OutputKind::positions;
    case Setting::kinematic:
    case Setting::kinematic_weighted:
      return OutputKind::bicycle_controls;
    case Setting::axay:
    case Setting::axay_weighted:
      return OutputKind::particle_controls;
  }
  return OutputKind::positions;
}

struct SimConfig
{
  Setting setting{Setting::xy};
  int t_obs{10};
  int t_horizon{30};
  int t_update{1};
  int t_sim{50};
  double dt{kDefaultDt};
  double observe_radius{70.0};
  double alpha{0.2};
  KinematicLimits limits{};
  GeometryPolicy geometry_policy{GeometryPolicy::fixed_ratio};
  double lr_ratio{0.5};
  double v_eps{0.1};

  PredictorSettings predictor_settings() const
  {
    return PredictorSettings{t_horizon, dt, limits, geometry_policy, lr_ratio};
  }
};

inline void validate(const SimConfig & c)
{
  if (c.t_obs < 3) throw DomainError("t_obs must be at least 3");
  if (c.t_horizon < 2) throw DomainError("t_horizon must be at least 2");
  if (c.t_update < 1 || c.t_update > c.t_horizon) throw DomainError("need 1 <= t_update <= t_horizon");
  if (c.t_sim < 1) throw DomainError("t_sim must be at least 1");
  if (!(c.dt > 0.0)) throw DomainError("dt must be positive");
  if (!(c.observe_radius >= 0.0)) throw DomainError("observe_radius must be non-negative");
  if (!(c.alpha >= 0.0 && c.alpha < 1.0)) throw DomainError("alpha must lie in [0, 1)");
  if (!(c.limits.a_max > 0.0) || !(c.limits.beta_max > 0.0) || !(c.limits.beta_max < kPi / 2)) {
    throw DomainError("kinematic limits out of range");
  }
}

struct Collision
{
  FrameIndex frame{0};
  std::string agent;

  friend bool operator==(const Collision &, const Collision &) = default;
};

enum class RunStatus { ok, failed };

struct SimResult
{
  std::string scenario_id;
  Setting setting{Setting::xy};
  std::uint64_t seed{0};
  RunStatus status{RunStatus::ok};
  std::string error;
  int t_update{1};
  /// Ground-truth frames that seeded the loop.
  Trajectory history;
  /// Committed frames, starting at t0. Exactly t_sim frames when status is ok.
  Trajectory simulated;
  /// Final (decoded, smoothed) trace of every iteration.
  std::vector<PlanarTrace> predictions;
  Trajectory ground_truth;
  std::vector<Collision> collisions;

  bool ok() const noexcept { return status == RunStatus::ok; }
  friend bool operator==(const SimResult &, const SimResult &) = default;
};

/// Observation for the frame at the end of `window`. Neighbor states are kept when within
/// `radius` of the target's current position; of those, the latest contiguous run is used.
inline ObservationWindow build_observation(
  const Scenario & scenario, const Trajectory & window, double radius)
{
  ObservationWindow obs;
  obs.target_history = window;
  obs.dt = window.dt;
  obs.map = scenario.map ? &*scenario.map : nullptr;
  const FrameIndex last = window.end_frame() - 1;
  const Point2 here = window.back().position();
  for (const auto & [id, log] : scenario.agents) {
    if (id == scenario.simulated_agent) {
      continue;
    }
    Trajectory kept{0, log.dt, {}};
    for (FrameIndex f = last; f >= window.start_frame; --f) {
      if (!log.contains(f) || distance(log.at_frame(f).position(), here) > radius) {
        if (!kept.states.empty()) break;
        continue;
      }
      kept.states.push_back(log.at_frame(f));
      kept.start_frame = f;
    }
    if (!kept.states.empty()) {
      std::reverse(kept.states.begin(), kept.states.end());
      obs.neighbor_histories.emplace(id, std::move(kept));
    }
  }
  return obs;
}

namespace detail
{
/// Heading/speed profile for `trace`, with the current position prepended so the first
/// predicted frame has a backward neighbor. Returns one state per trace point.
inline std::vector<AgentState> profile_after(
  const AgentState & current, const PlanarTrace & trace, double v_eps)
{
  PlanarTrace joined{trace.start_frame - 1, trace.dt, {current.position()}};
  joined.points.insert(joined.points.end(), trace.points.begin(), trace.points.end());
  auto prof = derive_profile(joined, current, v_eps);
  prof.states.erase(prof.states.begin());
  return std::move(prof.states);
}

/// Run header, seeding history and ground truth; no committed frames yet.
inline SimResult empty_result(const Scenario & scenario, const SimConfig & cfg, std::uint64_t seed)
{
  const Trajectory & log = scenario.simulated_log();
  SimResult res;
  res.scenario_id = scenario.id;
  res.setting = cfg.setting;
  res.seed = seed;
  res.t_update = cfg.t_update;
  res.history = Trajectory{scenario.t0 - cfg.t_obs, cfg.dt, {}};
  for (FrameIndex f = scenario.t0 - cfg.t_obs; f < scenario.t0; ++f) {
    res.history.states.push_back(log.at_frame(f));
  }
  res.ground_truth = Trajectory{scenario.t0, cfg.dt, {}};
  for (FrameIndex f = scenario.t0; f < scenario.t0 + cfg.t_sim; ++f) {
    res.ground_truth.states.push_back(log.at_frame(f));
  }
  res.simulated = Trajectory{scenario.t0, cfg.dt, {}};
  return res;
}
}  // namespace detail

/// Runs one scenario to completion (or failure). Never throws for predictor or numeric
/// failures; those come back as a failed result holding the frames committed so far.
inline SimResult run_closed_loop(
  const Scenario & scenario, Predictor & predictor, const SimConfig & cfg, std::uint64_t seed = 0)
{
  validate(cfg);
  validate(scenario, cfg.t_obs, cfg.t_sim);
  SimResult res = detail::empty_result(scenario, cfg, seed);

  const OutputKind kind = required_kind(cfg.setting);
  const bool weighted = is_weighted(cfg.setting);
  const auto horizon = static_cast<std::size_t>(cfg.t_horizon);
  const auto obs_len = static_cast<std::size_t>(cfg.t_obs);

  // Ground-truth seed followed by every committed frame.
  Trajectory full = res.history;
  SmootherState smoother(cfg.alpha);

  auto fail = [&](const std::string & msg) {
    res.status = RunStatus::failed;
    res.error = msg;
    return res;
  };

  try {
    if (predictor.output_kind() != kind) {
      return fail(
        std::string("predictor emits ") + to_string(predictor.output_kind()) + ", setting " +
        to_string(cfg.setting) + " needs " + to_string(kind));
    }
    int committed = 0;
    while (committed < cfg.t_sim) {
      Trajectory window{full.end_frame() - cfg.t_obs, cfg.dt, {}};
      window.states.assign(full.states.end() - static_cast<std::ptrdiff_t>(obs_len), full.states.end());
      const ObservationWindow obs = build_observation(scenario, window, cfg.observe_radius);
      const AgentState & current = obs.current();
      const FrameIndex cf = obs.current_frame();

      PredictionOutput out = predictor.predict(obs);
      validate(out, horizon);

      PlanarTrace trace{cf + 1, cfg.dt, {}};
      std::vector<AgentState> states;
      Trajectory roll;
      switch (kind) {
        case OutputKind::positions:
          trace.points = out.positions.points;
          break;
        case OutputKind::bicycle_controls: {
          std::vector<BicycleControl> u;
          u.reserve(horizon);
          for (const auto & c : out.bicycle) u.push_back(clamp(c, cfg.limits));
          const auto geom =
            estimate_geometry(window, current.length, cfg.geometry_policy, cfg.lr_ratio);
          roll = bicycle_rollout(current, u, geom, cfg.dt, cf);
          break;
        }
        case OutputKind::particle_controls: {
          std::vector<ParticleControl> u;
          u.reserve(horizon);
          for (const auto & c : out.particle) u.push_back(clamp(c, cfg.limits));
          roll = particle_rollout(current, u, cfg.dt, cf);
          break;
        }
      }
      if (kind != OutputKind::positions) {
        for (std::size_t i = 1; i < roll.states.size(); ++i) {
          trace.points.push_back(roll.states[i].position());
        }
      }
      if (weighted) {
        auto [next, smoothed] = smooth_update(smoother, trace);
        smoother = std::move(next);
        trace = std::move(smoothed);
      }

      switch (cfg.setting) {
        case Setting::xy:
        case Setting::xy_weighted:
        case Setting::kinematic_weighted:
          states = detail::profile_after(current, trace, cfg.v_eps);
          break;
        case Setting::kinematic:
          states.assign(roll.states.begin() + 1, roll.states.end());
          break;
        case Setting::axay:
        case Setting::axay_weighted:
          states = detail::profile_after(current, trace, cfg.v_eps);
          for (std::size_t i = 0; i < states.size(); ++i) {
            states[i].v = roll.states[i + 1].v;
          }
          break;
      }
      res.predictions.push_back(trace);

      const int n = std::min(cfg.t_update, cfg.t_sim - committed);
      for (int k = 0; k < n; ++k) {
        const AgentState & s = states[static_cast<std::size_t>(k)];
        if (!is_valid(s)) {
          return fail("non-finite or invalid state at frame " + std::to_string(cf + 1 + k));
        }
        const FrameIndex f = cf + 1 + k;
        full.states.push_back(s);
        res.simulated.states.push_back(s);
        const OrientedBox box = footprint(s);
        for (const auto & [id, other] : scenario.agents) {
          if (id == scenario.simulated_agent || !other.contains(f)) continue;
          if (box_overlap(box, footprint(other.at_frame(f)))) {
            res.collisions.push_back({f, id});
          }
        }
      }
      committed += n;
    }
  } catch (const std::exception & e) {
    return fail(e.what());
  }
  return res;
}

/// Builds a predictor for one (scenario, setting, seed) run.
using PredictorFactory =
  std::function<PredictorPtr(const Scenario &, Setting, std::uint64_t seed)>;

/// Receives each finished run; called under a lock, so it may write shared state.
using ResultSink = std::function<void(const SimResult &)>;

/// Every (scenario, setting, seed) combination. Results come back scenario-major, then setting,
/// then seed, independent of `parallelism`. A run whose predictor cannot be built is recorded as
/// failed with its history and ground truth but no committed frames.
inline std::vector<SimResult> run_ablation(
  const std::vector<Scenario> & scenarios, const PredictorFactory & factory, const SimConfig & base,
  const std::vector<Setting> & settings, const std::vector<std::uint64_t> & seeds,
  const ResultSink & sink = {}, unsigned parallelism = 1)
{
  if (scenarios.empty()) throw DomainError("run_ablation: no scenarios");
  if (settings.empty()) throw DomainError("run_ablation: no settings");
  if (seeds.empty()) throw DomainError("run_ablation: no seeds");
  validate(base);

  struct Job
  {
    std::size_t scenario;
    Setting setting;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    for (auto st : settings) {
      for (auto sd : seeds) {
        jobs.push_back({i, st, sd});
      }
    }
  }
  std::vector<SimResult> results(jobs.size());
  std::mutex sink_mutex;
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job & job = jobs[j];
      const Scenario & sc = scenarios[job.scenario];
      SimConfig cfg = base;
      cfg.setting = job.setting;
      SimResult r;
      try {
        PredictorPtr p = factory(sc, job.setting, job.seed);
        r = run_closed_loop(sc, *p, cfg, job.seed);
      } catch (const std::exception & e) {
        try {
          validate(sc, cfg.t_obs, cfg.t_sim);
          r = detail::empty_result(sc, cfg, job.seed);
        } catch (const std::exception &) {
          r = SimResult{};
          r.scenario_id = sc.id;
          r.setting = job.setting;
          r.seed = job.seed;
          r.t_update = cfg.t_update;
        }
        r.status = RunStatus::failed;
        r.error = e.what();
      }
      if (sink) {
        std::lock_guard<std::mutex> lock(sink_mutex);
        sink(r);
      }
      results[j] = std::move(r);
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(jobs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto & t : pool) t.join();
  }
  return results;
}

}  // namespace reacsim

#endif  // REACSIM__SIM_ENGINE_HPP_
