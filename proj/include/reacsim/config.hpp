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

// INI-style run configuration. Section names group keys, so `[kinematics] a_max = 8` is the
// key kinematics.a_max. Every key is optional.
//
//   seeds = 0,1,2            parallelism = 4
//   [sim]        setting t_obs t_horizon t_update t_sim dt observe_radius
//   [smoothing]  alpha
//   [kinematics] a_max beta_max lr_ratio geometry_policy
//   [spline]     v_eps
//   [predictor]  positions bicycle particle noise noise_beta_scale command timeout_ms
//   [metrics]    mr_lateral mr_longitudinal mr_table jerk

#ifndef REACSIM__CONFIG_HPP_
#define REACSIM__CONFIG_HPP_

#include "reacsim/data_ingest.hpp"
#include "reacsim/metrics.hpp"
#include "reacsim/predictor_factory.hpp"
#include "reacsim/sim_engine.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace reacsim
{

struct RunConfig
{
  SimConfig sim{};
  PredictorSpec predictor{};
  std::vector<std::uint64_t> seeds{0};
  unsigned parallelism{std::max(1u, std::thread::hardware_concurrency())};
  MissThresholds miss{};
  JerkMode jerk{JerkMode::speed};
};

/// "min_speed:threshold,..." pairs, e.g. "0:2.0,10:3.0".
inline std::vector<std::pair<double, double>> parse_threshold_steps(const std::string & s)
{
  std::vector<std::pair<double, double>> out;
  for (auto item : detail::split(s, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    double v = 0.0, t = 0.0;
    if (
      colon == std::string_view::npos || !detail::parse_number(detail::trim(item.substr(0, colon)), v) ||
      !detail::parse_number(detail::trim(item.substr(colon + 1)), t)) {
      throw ParseError("bad threshold step '" + std::string(item) + "' (want speed:threshold)");
    }
    out.emplace_back(v, t);
  }
  if (out.empty()) throw ParseError("empty threshold table");
  std::sort(out.begin(), out.end());
  return out;
}

/// CSV with header "min_speed,longitudinal".
inline std::vector<std::pair<double, double>> load_threshold_table(std::istream & in)
{
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<double, double>> out;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto cells = detail::split(line, ',');
    double v = 0.0, t = 0.0;
    if (cells.size() != 2 || !detail::parse_number(cells[0], v) || !detail::parse_number(cells[1], t)) {
      throw ParseError("expected '<min_speed>,<longitudinal>'", line_no);
    }
    out.emplace_back(v, t);
  }
  if (out.empty()) throw ParseError("empty threshold table");
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::uint64_t> parse_seed_list(const std::string & s)
{
  std::vector<std::uint64_t> out;
  for (auto item : detail::split(s, ',')) {
    if (item.empty()) continue;
    std::uint64_t v = 0;
    if (!detail::parse_number(item, v)) throw ParseError("bad seed '" + std::string(item) + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty seed list");
  return out;
}

namespace detail
{
/// Present keys must convert; ptree::get(path, default) would silently keep the default.
template <typename T>
T get_strict(const boost::property_tree::ptree & tree, const char * key, T fallback)
{
  const auto child = tree.get_child_optional(key);
  if (!child) return fallback;
  const std::string raw(detail::trim(child->data()));
  if constexpr (std::is_same_v<T, std::string>) {
    return raw;
  } else {
    T v{};
    if (!detail::parse_number(raw, v)) {
      throw ParseError("config: bad value '" + raw + "' for " + key);
    }
    return v;
  }
}
}  // namespace detail

inline RunConfig parse_config(std::istream & in)
{
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error & e) {
    throw ParseError(e.message(), e.line());
  }
  RunConfig c;
  auto & s = c.sim;
  if (auto v = tree.get_optional<std::string>("sim.setting")) s.setting = parse_setting(*v);
  s.t_obs = detail::get_strict(tree, "sim.t_obs", s.t_obs);
  s.t_horizon = detail::get_strict(tree, "sim.t_horizon", s.t_horizon);
  s.t_update = detail::get_strict(tree, "sim.t_update", s.t_update);
  s.t_sim = detail::get_strict(tree, "sim.t_sim", s.t_sim);
  s.dt = detail::get_strict(tree, "sim.dt", s.dt);
  s.observe_radius = detail::get_strict(tree, "sim.observe_radius", s.observe_radius);
  s.alpha = detail::get_strict(tree, "smoothing.alpha", s.alpha);
  s.limits.a_max = detail::get_strict(tree, "kinematics.a_max", s.limits.a_max);
  s.limits.beta_max = detail::get_strict(tree, "kinematics.beta_max", s.limits.beta_max);
  s.lr_ratio = detail::get_strict(tree, "kinematics.lr_ratio", s.lr_ratio);
  if (auto v = tree.get_optional<std::string>("kinematics.geometry_policy")) {
    s.geometry_policy = parse_geometry_policy(*v);
  }
  s.v_eps = detail::get_strict(tree, "spline.v_eps", s.v_eps);

  auto & p = c.predictor;
  p.positions = detail::get_strict(tree, "predictor.positions", p.positions);
  p.bicycle = detail::get_strict(tree, "predictor.bicycle", p.bicycle);
  p.particle = detail::get_strict(tree, "predictor.particle", p.particle);
  p.noise = detail::get_strict(tree, "predictor.noise", p.noise);
  p.noise_beta_scale = detail::get_strict(tree, "predictor.noise_beta_scale", p.noise_beta_scale);
  p.external_command = detail::get_strict(tree, "predictor.command", p.external_command);
  p.timeout_ms = detail::get_strict(tree, "predictor.timeout_ms", p.timeout_ms);

  if (auto v = tree.get_optional<std::string>("seeds")) c.seeds = parse_seed_list(*v);
  if (auto v = tree.get_optional<std::string>("sim.seeds")) c.seeds = parse_seed_list(*v);
  c.parallelism = detail::get_strict(tree, "parallelism", c.parallelism);
  c.parallelism = detail::get_strict(tree, "sim.parallelism", c.parallelism);

  c.miss.lateral = detail::get_strict(tree, "metrics.mr_lateral", c.miss.lateral);
  if (auto v = tree.get_optional<std::string>("metrics.mr_longitudinal")) {
    c.miss.longitudinal = parse_threshold_steps(*v);
  }
  if (auto v = tree.get_optional<std::string>("metrics.mr_table")) {
    std::ifstream t(*v);
    if (!t) throw ParseError("cannot open threshold table '" + *v + "'");
    c.miss.longitudinal = load_threshold_table(t);
  }
  if (auto v = tree.get_optional<std::string>("metrics.jerk")) c.jerk = parse_jerk_mode(*v);
  validate(c.sim);
  return c;
}

inline RunConfig load_config(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace reacsim

#endif  // REACSIM__CONFIG_HPP_
