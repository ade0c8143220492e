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

#include "reacsim/kinematics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace reacsim;

namespace
{
// Closed-form circle for constant beta and speed, started at the origin heading +x.
Point2 circle_at(double v, double beta, double l_r, double t)
{
  const double w = v / l_r * std::sin(beta);
  return {v / w * (std::sin(w * t + beta) - std::sin(beta)),
          v / w * (std::cos(beta) - std::cos(w * t + beta))};
}
}  // namespace

TEST(BicycleStep, StraightLine)
{
  const AgentState s{0, 0, 0, 10, 4, 2};
  const auto n = bicycle_step(s, {0, 0}, {1.5, 1.5}, 0.1);
  EXPECT_EQ(n.x, 1.0);
  EXPECT_EQ(n.y, 0.0);
  EXPECT_EQ(n.psi, 0.0);
  EXPECT_EQ(n.v, 10.0);
  EXPECT_EQ(n.length, 4);
  EXPECT_EQ(n.width, 2);
}

TEST(BicycleStep, TurningAccelerating)
{
  const auto n = bicycle_step({0, 0, 0, 10, 4, 2}, {2, 0.1}, {1.5, 2.5}, 0.1);
  // 30-digit evaluation of the Euler update.
  EXPECT_NEAR(n.x, 0.995004165278025766, 1e-15);
  EXPECT_NEAR(n.y, 0.0998334166468281523, 1e-15);
  EXPECT_NEAR(n.psi, 0.0665556110978854349, 1e-15);
  EXPECT_NEAR(n.v, 10.2, 1e-15);
  EXPECT_NEAR(n.x, 0.99500, 5e-6);
  EXPECT_NEAR(n.y, 0.099833, 5e-7);
  EXPECT_NEAR(n.psi, 0.066556, 5e-7);
}

TEST(BicycleStep, ZeroVelocityFixedPoint)
{
  const AgentState s{3, -2, 1.0, 0, 4, 2};
  for (double beta : {-0.6, 0.0, 0.3}) {
    EXPECT_EQ(bicycle_step(s, {0, beta}, {1.5, 1.5}, 0.1), s);
  }
}

TEST(BicycleStep, Errors)
{
  const AgentState s{0, 0, 0, 10, 4, 2};
  EXPECT_THROW(bicycle_step(s, {0, 0}, {1.5, 1.5}, 0.0), DomainError);
  EXPECT_THROW(bicycle_step(s, {0, 0}, {0.0, 1.5}, 0.1), DomainError);
  EXPECT_THROW(bicycle_step({0, 0, 0, 1e308, 4, 2}, {1e308, 0}, {1.5, 1.5}, 10.0), NumericError);
}

TEST(BicycleRollout, ZeroControls)
{
  const std::vector<BicycleControl> u(30);
  const auto t = bicycle_rollout({0, 0, 0, 10, 4, 2}, u, {2, 2}, 0.1, 7);
  ASSERT_EQ(t.size(), 31u);
  EXPECT_EQ(t.start_frame, 7);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(t.states[i].x, static_cast<double>(i), 1e-12);
    EXPECT_EQ(t.states[i].y, 0.0);
    EXPECT_EQ(t.states[i].psi, 0.0);
    EXPECT_EQ(t.states[i].v, 10.0);
  }
}

TEST(BicycleRollout, EmptyControls)
{
  EXPECT_THROW(bicycle_rollout({}, std::vector<BicycleControl>{}, {2, 2}, 0.1), DomainError);
}

TEST(BicycleRollout, ConstantSlipCircle)
{
  const double v = 10, beta = 0.05, l_r = 1.5;
  EXPECT_NEAR(l_r / std::sin(beta), 30.0125036467946, 1e-12);
  auto run = [&](double dt) {
    const int n = static_cast<int>(std::lround(5.0 / dt));
    const std::vector<BicycleControl> u(n, BicycleControl{0, beta});
    return bicycle_rollout({0, 0, 0, v, 4, 2}, u, {l_r, 1.5}, dt);
  };
  const auto coarse = run(0.1);
  const double rate = v / l_r * std::sin(beta);
  for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
    EXPECT_NEAR(wrap_angle(coarse.states[i + 1].psi - coarse.states[i].psi), rate * 0.1, 1e-12);
  }
  const Point2 center{-l_r / std::sin(beta) * std::sin(beta), l_r / std::sin(beta) * std::cos(beta)};
  for (const auto & s : coarse.states) {
    EXPECT_NEAR(distance(s.position(), center), l_r / std::sin(beta), 1.0);
  }
  auto err = [&](const Trajectory & t) {
    return distance(t.back().position(), circle_at(v, beta, l_r, 5.0));
  };
  const double e1 = err(coarse), e2 = err(run(0.05)), e3 = err(run(0.0001));
  EXPECT_NEAR(e1 / e2, 2.0, 0.2);
  EXPECT_LT(e3, e1 * 2e-3);
}

TEST(BicycleRollout, FeasibilityBoundsHoldExactly)
{
  const KinematicLimits lim{};
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> a(-lim.a_max, lim.a_max), b(-lim.beta_max, lim.beta_max),
    v0(-5, 30), psi(-kPi, kPi), lr(0.5, 3.0), edge(0, 1);
  for (int seq = 0; seq < 200; ++seq) {
    std::vector<BicycleControl> u(40);
    for (auto & c : u) {
      c = {a(rng), b(rng)};
      // Exercise the bounds themselves, as produced by clamping.
      if (edge(rng) < 0.3) c.a = edge(rng) < 0.5 ? lim.a_max : -lim.a_max;
      if (edge(rng) < 0.3) c.beta = edge(rng) < 0.5 ? lim.beta_max : -lim.beta_max;
    }
    const BicycleGeometry g{lr(rng), 1.0};
    const auto t = bicycle_rollout({0, 0, psi(rng), v0(rng), 4, 2}, u, g, 0.1);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      const auto & s0 = t.states[i];
      const auto & s1 = t.states[i + 1];
      ASSERT_LE(std::abs(s1.v - s0.v), lim.a_max * 0.1);
      ASSERT_LE(std::abs(wrap_angle(s1.psi - s0.psi)), std::abs(s0.v) / g.l_r * std::sin(lim.beta_max) * 0.1);
    }
  }
}

TEST(BicycleRollout, ReversibleControls)
{
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> a(-8, 8), b(-0.6, 0.6);
  for (int seq = 0; seq < 50; ++seq) {
    std::vector<BicycleControl> u(30);
    for (auto & c : u) c = {a(rng), b(rng)};
    const BicycleGeometry g{1.3, 1.7};
    // Start fast enough that speed never crosses zero within the sequence.
    const auto t = bicycle_rollout({0, 0, 0.3, 30, 4, 2}, u, g, 0.1);
    const auto back = recover_bicycle_controls(t, g);
    ASSERT_EQ(back.size(), u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      EXPECT_NEAR(back[i].a, u[i].a, 1e-9);
      EXPECT_NEAR(back[i].beta, u[i].beta, 1e-9);
    }
  }
}

TEST(ParticleStep, Examples)
{
  EXPECT_EQ(particle_step({0, 0, 5, 0}, {0, 0}, 0.1), (ParticleState{0.5, 0, 5, 0}));
  const auto n = particle_step({0, 0, 5, 0}, {1, 2}, 0.1);
  EXPECT_DOUBLE_EQ(n.x, 0.505);
  EXPECT_DOUBLE_EQ(n.y, 0.01);
  EXPECT_DOUBLE_EQ(n.vx, 5.1);
  EXPECT_DOUBLE_EQ(n.vy, 0.2);
  EXPECT_EQ(particle_step({0, 0, 0, 0}, {0, 0}, 0.1), (ParticleState{0, 0, 0, 0}));
  EXPECT_THROW(particle_step({0, 0, 0, 0}, {0, 0}, -0.1), DomainError);
}

TEST(ParticleRollout, Examples)
{
  const std::vector<ParticleControl> zero(30);
  const auto line = particle_rollout({0, 0, 0, 10, 4, 2}, zero, 0.1);
  ASSERT_EQ(line.size(), 31u);
  for (std::size_t i = 0; i < line.size(); ++i) {
    EXPECT_NEAR(line.states[i].x, static_cast<double>(i), 1e-12);
    EXPECT_EQ(line.states[i].y, 0.0);
  }

  const std::vector<ParticleControl> up(20, ParticleControl{0, 1});
  const auto para = particle_rollout({0, 0, 0, 0, 4, 2}, up, 0.1);
  for (std::size_t i = 0; i < para.size(); ++i) {
    const double t = 0.1 * static_cast<double>(i);
    EXPECT_EQ(para.states[i].x, 0.0);
    EXPECT_NEAR(para.states[i].y, 0.5 * t * t, 1e-12);
  }
  EXPECT_NEAR(para.back().psi, kPi / 2, 1e-15);

  const std::vector<ParticleControl> fwd(10, ParticleControl{1, 0});
  EXPECT_NEAR(particle_rollout({0, 0, 0, 10, 4, 2}, fwd, 0.1).back().v, 11.0, 1e-12);
  EXPECT_THROW(particle_rollout({}, std::vector<ParticleControl>{}, 0.1), DomainError);
}

TEST(ParticleRollout, ZeroAccelerationConservesSpeedExactly)
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> v(-20, 20), psi(-kPi, kPi);
  const std::vector<ParticleControl> zero(50);
  for (int i = 0; i < 200; ++i) {
    const AgentState s{1, 2, psi(rng), v(rng), 4, 2};
    for (const auto & x : particle_rollout(s, zero, 0.1).states) ASSERT_EQ(x.v, s.v);
  }
}

TEST(ParticleRollout, RecoveredControlsReproducePositions)
{
  const AgentState s0{0, 0, 0.4, 7, 4, 2};
  std::vector<Point2> target;
  for (int k = 1; k <= 30; ++k) target.push_back({std::sin(0.1 * k) * 3 + k, 0.05 * k * k});
  const auto u = recover_particle_controls(s0, target, 0.1);
  const auto t = particle_rollout(s0, u, 0.1);
  for (std::size_t i = 0; i < target.size(); ++i) {
    EXPECT_NEAR(t.states[i + 1].x, target[i].x, 1e-9);
    EXPECT_NEAR(t.states[i + 1].y, target[i].y, 1e-9);
  }
}

TEST(SlipSteer, Examples)
{
  const BicycleGeometry g{1.5, 1.5};
  EXPECT_EQ(beta_from_gamma(0.0, g), 0.0);
  EXPECT_NEAR(beta_from_gamma(0.2, g), 0.101010073458161286, 1e-15);
  EXPECT_NEAR(beta_from_gamma(0.2, g), 0.101011, 1e-6);
  EXPECT_EQ(gamma_from_beta(0.0, g), 0.0);
  EXPECT_NEAR(gamma_from_beta(beta_from_gamma(0.3, g), g), 0.3, 1e-12);
  EXPECT_NEAR(gamma_from_beta(0.101011, g), 0.200001798227971988, 1e-14);
  EXPECT_NEAR(gamma_from_beta(0.101011, g), 0.2, 1e-5);
  const BicycleGeometry rear_only{2.0, 0.0};
  for (double gm : {-1.5, -0.3, 0.0, 0.7, 1.4}) EXPECT_DOUBLE_EQ(beta_from_gamma(gm, rear_only), gm);
}

TEST(SlipSteer, DomainErrors)
{
  const BicycleGeometry g{1.5, 1.5};
  EXPECT_THROW(beta_from_gamma(kPi / 2, g), DomainError);
  EXPECT_THROW(beta_from_gamma(-2.0, g), DomainError);
  EXPECT_THROW(gamma_from_beta(kPi / 2, g), DomainError);
  EXPECT_THROW(gamma_from_beta(std::nan(""), g), DomainError);
}

TEST(SlipSteer, OddAndInverse)
{
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> gam(-1.2, 1.2), ratio(0.25, 4.0);
  for (int i = 0; i < 10000; ++i) {
    const double r = ratio(rng);
    const BicycleGeometry g{r, 1.0};
    const double x = gam(rng);
    const double b = beta_from_gamma(x, g);
    ASSERT_LT(std::abs(gamma_from_beta(b, g) - x), 1e-12);
    ASSERT_EQ(beta_from_gamma(-x, g), -b);
    ASSERT_EQ(gamma_from_beta(-b, g), -gamma_from_beta(b, g));
  }
}

TEST(EstimateGeometry, FixedRatio)
{
  const Trajectory h{0, 0.1, {AgentState{}, AgentState{}}};
  const auto g = estimate_geometry(h, 4.0, GeometryPolicy::fixed_ratio);
  EXPECT_EQ(g.l_r, 2.0);
  EXPECT_EQ(g.l_f, 2.0);
  EXPECT_THROW(estimate_geometry(Trajectory{0, 0.1, {AgentState{}}}, 4.0, GeometryPolicy::fixed_ratio), DomainError);
  EXPECT_THROW(estimate_geometry(h, 0.0, GeometryPolicy::fixed_ratio), DomainError);
}

TEST(EstimateGeometry, CurvatureFitRecoversRearDistance)
{
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> b(-0.3, 0.3);
  std::vector<BicycleControl> u(20);
  for (auto & c : u) c = {0.5, b(rng)};
  const auto t = bicycle_rollout({5, 5, 0.2, 8, 4.2, 2}, u, {1.5, 2.7}, 0.1);
  const auto g = estimate_geometry(t, 4.2, GeometryPolicy::curvature_fit);
  EXPECT_NEAR(g.l_r, 1.5, 0.05);
  EXPECT_NEAR(g.l_r + g.l_f, 4.2, 1e-6);
}

TEST(EstimateGeometry, CurvatureFitFallsBackWhenStationary)
{
  Trajectory h{0, 0.1, std::vector<AgentState>(10, AgentState{1, 1, 0.3, 0.2, 5, 2})};
  const auto g = estimate_geometry(h, 5.0, GeometryPolicy::curvature_fit, 0.4);
  EXPECT_EQ(g.l_r, 2.0);
  EXPECT_EQ(g.l_f, 3.0);
  EXPECT_EQ(parse_geometry_policy("curvature-fit"), GeometryPolicy::curvature_fit);
  EXPECT_THROW(parse_geometry_policy("magic"), DomainError);
}

TEST(Clamp, BoundsControls)
{
  const KinematicLimits lim{};
  const auto c = clamp(BicycleControl{20, -1.0}, lim);
  EXPECT_EQ(c.a, 8.0);
  EXPECT_EQ(c.beta, -0.6);
  const auto p = clamp(ParticleControl{-9, 3}, lim);
  EXPECT_EQ(p.ax, -8.0);
  EXPECT_EQ(p.ay, 3.0);
}
