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


#include "reacsim/config.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace reacsim;

namespace
{
RunConfig parse(const std::string & text)
{
  std::istringstream in(text);
  return parse_config(in);
}
}  // namespace

TEST(Config, EmptyFileGivesDefaults)
{
  const RunConfig c = parse("");
  EXPECT_EQ(c.sim.setting, Setting::xy);
  EXPECT_EQ(c.sim.t_obs, 10);
  EXPECT_EQ(c.sim.t_horizon, 30);
  EXPECT_EQ(c.sim.t_update, 1);
  EXPECT_EQ(c.sim.t_sim, 50);
  EXPECT_EQ(c.sim.dt, 0.1);
  EXPECT_EQ(c.sim.observe_radius, 70.0);
  EXPECT_EQ(c.sim.alpha, 0.2);
  EXPECT_EQ(c.sim.limits.a_max, 8.0);
  EXPECT_EQ(c.sim.limits.beta_max, 0.6);
  EXPECT_EQ(c.seeds, std::vector<std::uint64_t>{0});
  EXPECT_GE(c.parallelism, 1u);
  EXPECT_EQ(c.miss.lateral, 1.0);
  EXPECT_EQ(c.jerk, JerkMode::speed);
  EXPECT_EQ(c.predictor.positions, "constant_velocity");
}

TEST(Config, EveryKeyIsRead)
{
  const RunConfig c = parse(R"(
seeds = 3, 4,5
parallelism = 2
[sim]
setting = axay_weighted
t_obs = 12
t_horizon = 20
t_update = 2
t_sim = 40
dt = 0.05
observe_radius = 50
[smoothing]
alpha = 0.3
[kinematics]
a_max = 6
beta_max = 0.5
lr_ratio = 0.4
geometry_policy = fixed_ratio
[spline]
v_eps = 0.2
[predictor]
positions = lane_follow
bicycle = oracle_replay
particle = external
noise = 0.3
noise_beta_scale = 0.05
command = python3 serve.py --model constant_velocity
timeout_ms = 500
[metrics]
mr_lateral = 1.5
mr_longitudinal = 0:2, 12:3.5
jerk = vector
)");
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{3, 4, 5}));
  EXPECT_EQ(c.parallelism, 2u);
  EXPECT_EQ(c.sim.setting, Setting::axay_weighted);
  EXPECT_EQ(c.sim.t_obs, 12);
  EXPECT_EQ(c.sim.t_horizon, 20);
  EXPECT_EQ(c.sim.t_update, 2);
  EXPECT_EQ(c.sim.t_sim, 40);
  EXPECT_EQ(c.sim.dt, 0.05);
  EXPECT_EQ(c.sim.observe_radius, 50.0);
  EXPECT_EQ(c.sim.alpha, 0.3);
  EXPECT_EQ(c.sim.limits.a_max, 6.0);
  EXPECT_EQ(c.sim.limits.beta_max, 0.5);
  EXPECT_EQ(c.sim.lr_ratio, 0.4);
  EXPECT_EQ(c.sim.v_eps, 0.2);
  EXPECT_EQ(c.predictor.positions, "lane_follow");
  EXPECT_EQ(c.predictor.bicycle, "oracle_replay");
  EXPECT_EQ(c.predictor.particle, "external");
  EXPECT_EQ(c.predictor.noise, 0.3);
  EXPECT_EQ(c.predictor.noise_beta_scale, 0.05);
  EXPECT_EQ(c.predictor.external_command, "python3 serve.py --model constant_velocity");
  EXPECT_EQ(c.predictor.timeout_ms, 500);
  EXPECT_EQ(c.miss.lateral, 1.5);
  EXPECT_EQ(c.miss.longitudinal, (std::vector<std::pair<double, double>>{{0, 2}, {12, 3.5}}));
  EXPECT_EQ(c.jerk, JerkMode::vector);
}

TEST(Config, ErrorsAreParseOrDomainErrors)
{
  EXPECT_THROW(parse("[sim]\nt_obs = ten\n"), ParseError);
  EXPECT_THROW(parse("[sim]\nsetting = sideways\n"), DomainError);
  EXPECT_THROW(parse("[sim]\nt_update = 40\n"), DomainError);
  EXPECT_THROW(parse("[smoothing]\nalpha = 1.0\n"), DomainError);
  EXPECT_THROW(parse("[metrics]\njerk = lateral\n"), DomainError);
  EXPECT_THROW(parse("seeds = 1,x\n"), ParseError);
  EXPECT_THROW(parse("[metrics]\nmr_longitudinal = 3\n"), ParseError);
  EXPECT_THROW(parse("[metrics]\nmr_table = /nonexistent/table.csv\n"), ParseError);
  try {
    parse("[sim]\nt_obs = 10\nthis line is broken\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError & e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(load_config("/nonexistent/reacsim.ini"), ParseError);
}

TEST(Config, ThresholdTableFile)
{
  const auto path = std::filesystem::temp_directory_path() / "reacsim_thresholds.csv";
  {
    std::ofstream out(path);
    out << "min_speed,longitudinal\n10,3.0\n0,2.0\n\n20,4.5\n";
  }
  const RunConfig c = parse("[metrics]\nmr_table = " + path.string() + "\n");
  EXPECT_EQ(c.miss.longitudinal, (std::vector<std::pair<double, double>>{{0, 2}, {10, 3}, {20, 4.5}}));
  EXPECT_EQ(c.miss.longitudinal_at(15.0), 3.0);

  std::istringstream bad("min_speed,longitudinal\n1,2,3\n");
  try {
    load_threshold_table(bad);
    FAIL() << "expected ParseError";
  } catch (const ParseError & e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream header_only("min_speed,longitudinal\n");
  EXPECT_THROW(load_threshold_table(header_only), ParseError);
  std::filesystem::remove(path);
}

TEST(Config, SeedListsAndSteps)
{
  EXPECT_EQ(parse_seed_list("7"), std::vector<std::uint64_t>{7});
  EXPECT_EQ(parse_seed_list("1,2,,3"), (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_THROW(parse_seed_list(""), ParseError);
  EXPECT_THROW(parse_seed_list("-1"), ParseError);
  EXPECT_EQ(parse_threshold_steps("5:1,0:2"), (std::vector<std::pair<double, double>>{{0, 2}, {5, 1}}));
  EXPECT_THROW(parse_threshold_steps(""), ParseError);
}
