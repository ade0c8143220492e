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

#include "reacsim/spline.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace reacsim;

TEST(FitSpline, ReproducesLine)
{
  PlanarTrace t{0, 0.1, {{0, 0}, {0.1, 0.2}, {0.2, 0.4}, {0.3, 0.6}}};
  const auto sp = fit_spline(t);
  for (double q = -0.05; q <= 0.35; q += 0.013) {
    EXPECT_NEAR(sp.x(q), q, 1e-12);
    EXPECT_NEAR(sp.y(q), 2.0 * q, 1e-12);
    EXPECT_NEAR(sp.x.derivative(q), 1.0, 1e-10);
    EXPECT_NEAR(sp.y.derivative(q), 2.0, 1e-10);
  }
}

TEST(FitSpline, ThreeCollinearPointsGiveConstantDerivative)
{
  PlanarTrace t{4, 0.1, {{1, 1}, {2, 3}, {3, 5}}};
  const auto sp = fit_spline(t);
  for (double q = 0.4; q <= 0.6; q += 0.01) {
    EXPECT_NEAR(sp.x.derivative(q), 10.0, 1e-9);
    EXPECT_NEAR(sp.y.derivative(q), 20.0, 1e-9);
  }
}

TEST(FitSpline, InterpolatesKnotsAndIsNatural)
{
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> d(-30, 30);
  for (int trial = 0; trial < 50; ++trial) {
    PlanarTrace t{static_cast<FrameIndex>(trial), 0.1, {}};
    for (int i = 0; i < 10; ++i) t.points.push_back({d(rng), d(rng)});
    const auto sp = fit_spline(t);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double q = static_cast<double>(t.start_frame + static_cast<FrameIndex>(i)) * 0.1;
      EXPECT_NEAR(sp.x(q), t.points[i].x, 1e-10);
      EXPECT_NEAR(sp.y(q), t.points[i].y, 1e-10);
    }
    const auto & k = sp.x.knots();
    EXPECT_NEAR(sp.x.second_derivative(k.front()), 0.0, 1e-8);
    EXPECT_NEAR(sp.x.second_derivative(k.back()), 0.0, 1e-8);
    // C1 and C2 continuity at interior knots.
    for (std::size_t i = 1; i + 1 < k.size(); ++i) {
      const double e = 1e-9;
      EXPECT_NEAR(sp.y.derivative(k[i] - e), sp.y.derivative(k[i] + e), 1e-3);
      EXPECT_NEAR(sp.y.second_derivative(k[i] - e), sp.y.second_derivative(k[i] + e), 1e-2);
    }
  }
}

TEST(FitSpline, MatchesTridiagonalReference)
{
  // Natural spline second derivatives from a dense solve of the same system.
  const std::vector<double> x{0, 0.1, 0.2, 0.3, 0.4};
  const std::vector<double> y{0, 1, 0, 2, 1};
  const double h = 0.1;
  // Interior equations: M[i-1] + 4 M[i] + M[i+1] = 6/h^2 (y[i-1] - 2y[i] + y[i+1]).
  const double r1 = 6 / (h * h) * (y[0] - 2 * y[1] + y[2]);
  const double r2 = 6 / (h * h) * (y[1] - 2 * y[2] + y[3]);
  const double r3 = 6 / (h * h) * (y[2] - 2 * y[3] + y[4]);
  // Cramer's rule on [[4,1,0],[1,4,1],[0,1,4]].
  const double det = 4 * (16 - 1) - 1 * (4 - 0);
  const double m1 = (r1 * 15 - 1 * (4 * r2 - r3)) / det;
  const double m2 = (4 * (4 * r2 - r3) - r1 * 4 + 0) / det;
  const double m3 = (4 * (4 * r3 - r2) - 1 * (1 * r3 - 0) + r1 * 1) / det;
  CubicSpline s(x, y);
  EXPECT_NEAR(s.second_derivative(0.1), m1, 1e-8);
  EXPECT_NEAR(s.second_derivative(0.2), m2, 1e-8);
  EXPECT_NEAR(s.second_derivative(0.3), m3, 1e-8);
}

TEST(FitSpline, Errors)
{
  EXPECT_THROW(fit_spline(PlanarTrace{0, 0.1, {{0, 0}, {1, 1}}}), DomainError);
  EXPECT_THROW(fit_spline(PlanarTrace{0, 0.1, {{0, 0}, {1, std::nan("")}, {2, 2}}}), DomainError);
  EXPECT_THROW(CubicSpline({0, 1, 1}, {0, 1, 2}), DomainError);
}

TEST(DeriveProfile, StraightAlongX)
{
  PlanarTrace t{0, 0.1, {}};
  for (int i = 0; i < 30; ++i) t.points.push_back({1.0 * i, 0});
  const auto p = derive_profile(t, AgentState{0, 0, 0.5, 0, 4.5, 1.9});
  for (const auto & s : p.states) {
    EXPECT_NEAR(s.psi, 0.0, 1e-12);
    EXPECT_NEAR(s.v, 10.0, 1e-9);
    EXPECT_EQ(s.length, 4.5);
    EXPECT_EQ(s.width, 1.9);
  }
}

TEST(DeriveProfile, DiagonalSlope)
{
  PlanarTrace t{0, 0.1, {}};
  for (int i = 0; i < 20; ++i) t.points.push_back({0.5 * i, 1.0 * i});
  const auto p = derive_profile(t, AgentState{});
  for (const auto & s : p.states) {
    EXPECT_NEAR(s.psi, 1.10714871779409050, 1e-12);
    EXPECT_NEAR(s.v, std::hypot(5.0, 10.0), 1e-9);
  }
}

TEST(DeriveProfile, StationaryHoldsPriorHeading)
{
  PlanarTrace t{0, 0.1, std::vector<Point2>(10, Point2{3, 4})};
  const auto p = derive_profile(t, AgentState{0, 0, -2.0, 5, 4, 2});
  for (const auto & s : p.states) {
    EXPECT_EQ(s.v, 0.0);
    EXPECT_EQ(s.psi, -2.0);
    EXPECT_EQ(s.x, 3.0);
  }
}

TEST(DeriveProfile, HoldsLastConfidentHeadingWhenStopping)
{
  // Moves along +y, then stops for good.
  PlanarTrace t{0, 0.1, {}};
  for (int i = 0; i < 10; ++i) t.points.push_back({0, 1.0 * i});
  for (int i = 0; i < 15; ++i) t.points.push_back({0, 9.0});
  const auto p = derive_profile(t, AgentState{});
  EXPECT_NEAR(p.states[3].psi, kPi / 2, 1e-6);
  EXPECT_NEAR(p.states.back().psi, p.states[20].psi, 0.0);
  EXPECT_LT(p.states.back().v, 0.1);
}

TEST(DeriveProfile, LinearReproductionAndNonNegativeSpeed)
{
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> d(-15, 15);
  for (int trial = 0; trial < 100; ++trial) {
    const double vx = d(rng), vy = d(rng), x0 = d(rng) * 10, y0 = d(rng) * 10;
    PlanarTrace t{trial, 0.1, {}};
    for (int i = 0; i < 30; ++i) t.points.push_back({x0 + vx * 0.1 * i, y0 + vy * 0.1 * i});
    const auto p = derive_profile(t, AgentState{});
    const double fd = distance(t.points[1], t.points[0]) / 0.1;
    for (const auto & s : p.states) {
      EXPECT_NEAR(s.psi, p.states[0].psi, 1e-9);
      EXPECT_NEAR(s.v, fd, 1e-9);
      EXPECT_GE(s.v, 0.0);
    }
  }
}
