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

#ifndef REACSIM__PREDICTOR_FACTORY_HPP_
#define REACSIM__PREDICTOR_FACTORY_HPP_

#include "reacsim/external_predictor.hpp"
#include "reacsim/predictors.hpp"
#include "reacsim/sim_engine.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace reacsim
{

/// Which predictor backs each head, plus the optional noise wrapper.
struct PredictorSpec
{
  std::string positions{"constant_velocity"};  // constant_velocity | lane_follow | oracle_replay | external
  std::string bicycle{"constant_control"};     // constant_control | oracle_replay | external
  std::string particle{"constant_control"};    // constant_control | oracle_replay | external
  double noise{0.0};
  double noise_beta_scale{0.1};
  std::string external_command;
  int timeout_ms{2000};

  const std::string & for_kind(OutputKind k) const
  {
    switch (k) {
      case OutputKind::positions:
        return positions;
      case OutputKind::bicycle_controls:
        return bicycle;
      case OutputKind::particle_controls:
        return particle;
    }
    return positions;
  }
};

/// 64-bit FNV-1a; stable across platforms, unlike std::hash.
inline std::uint64_t fnv1a64(std::string_view s)
{
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Noise stream seed for a run: depends on the scenario and the run seed, not on the setting,
/// so every setting of one scenario sees the same draw sequence.
inline std::uint64_t noise_seed(const Scenario & sc, std::uint64_t seed)
{
  return fnv1a64(sc.id) ^ (seed * 0x9E3779B97F4A7C15ull);
}

inline PredictorPtr make_predictor(
  const PredictorSpec & spec, const SimConfig & cfg, const Scenario & sc, OutputKind kind,
  std::uint64_t seed)
{
  const std::string & name = spec.for_kind(kind);
  const PredictorSettings ps = cfg.predictor_settings();
  PredictorPtr p;
  if (name == "constant_velocity" && kind == OutputKind::positions) {
    p = std::make_unique<ConstantVelocityPredictor>(ps);
  } else if (name == "lane_follow" && kind == OutputKind::positions) {
    p = std::make_unique<LaneFollowPredictor>(ps);
  } else if (name == "constant_control" && kind != OutputKind::positions) {
    p = std::make_unique<ConstantControlPredictor>(kind, ps);
  } else if (name == "oracle_replay") {
    p = std::make_unique<OracleReplayPredictor>(sc.simulated_log(), kind, ps);
  } else if (name == "external") {
    if (spec.external_command.empty()) {
      throw DomainError("predictor 'external' needs predictor.command");
    }
    p = std::make_unique<ExternalPredictor>(
      ExternalPredictorHandle::split_command(spec.external_command), kind, cfg.t_obs,
      cfg.t_horizon, cfg.dt, spec.timeout_ms);
  } else {
    throw DomainError(
      "predictor '" + name + "' cannot produce " + std::string(to_string(kind)));
  }
  if (spec.noise > 0.0) {
    p = std::make_unique<NoisyPredictor>(
      std::move(p), spec.noise, noise_seed(sc, seed), spec.noise_beta_scale);
  }
  return p;
}

inline PredictorFactory make_predictor_factory(PredictorSpec spec, SimConfig cfg)
{
  return [spec = std::move(spec), cfg](const Scenario & sc, Setting setting, std::uint64_t seed) {
    return make_predictor(spec, cfg, sc, required_kind(setting), seed);
  };
}

}  // namespace reacsim

#endif  // REACSIM__PREDICTOR_FACTORY_HPP_
