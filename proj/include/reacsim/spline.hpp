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

#ifndef REACSIM__SPLINE_HPP_
#define REACSIM__SPLINE_HPP_

#include "reacsim/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace reacsim
{

/// Natural cubic interpolating spline over strictly increasing knots.
class CubicSpline
{
public:
  CubicSpline(std::vector<double> knots, std::vector<double> values)
  : t_(std::move(knots)), y_(std::move(values)), m_(t_.size(), 0.0)
  {
    const std::size_t n = t_.size();
    if (n < 3 || y_.size() != n) {
      throw DomainError("CubicSpline: need at least 3 knots with matching values");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!(t_[i + 1] > t_[i])) {
        throw DomainError("CubicSpline: knots must be strictly increasing");
      }
    }
    // Thomas algorithm on the interior second derivatives; m_[0] = m_[n-1] = 0.
    const std::size_t k = n - 2;
    std::vector<double> diag(k), upper(k), rhs(k);
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t i = j + 1;
      const double h0 = t_[i] - t_[i - 1];
      const double h1 = t_[i + 1] - t_[i];
      diag[j] = 2.0 * (h0 + h1);
      upper[j] = h1;
      rhs[j] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    for (std::size_t j = 1; j < k; ++j) {
      const double lower = t_[j + 1] - t_[j];
      const double w = lower / diag[j - 1];
      diag[j] -= w * upper[j - 1];
      rhs[j] -= w * rhs[j - 1];
    }
    for (std::size_t j = k; j-- > 0;) {
      const double next = (j + 1 < k) ? m_[j + 2] : 0.0;
      m_[j + 1] = (rhs[j] - upper[j] * next) / diag[j];
    }
  }

  double operator()(double t) const
  {
    const std::size_t i = segment(t);
    const double h = t_[i + 1] - t_[i];
    const double a = t_[i + 1] - t;
    const double b = t - t_[i];
    return m_[i] * a * a * a / (6.0 * h) + m_[i + 1] * b * b * b / (6.0 * h) +
           (y_[i] / h - m_[i] * h / 6.0) * a + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b;
  }

  double derivative(double t) const
  {
    const std::size_t i = segment(t);
    const double h = t_[i + 1] - t_[i];
    const double a = t_[i + 1] - t;
    const double b = t - t_[i];
    return -m_[i] * a * a / (2.0 * h) + m_[i + 1] * b * b / (2.0 * h) + (y_[i + 1] - y_[i]) / h -
           (m_[i + 1] - m_[i]) * h / 6.0;
  }

  double second_derivative(double t) const
  {
    const std::size_t i = segment(t);
    const double h = t_[i + 1] - t_[i];
    return (m_[i] * (t_[i + 1] - t) + m_[i + 1] * (t - t_[i])) / h;
  }

  std::span<const double> knots() const noexcept { return t_; }

private:
  std::size_t segment(double t) const
  {
    // Queries outside the knot range extrapolate with the end cubics.
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const auto idx = static_cast<std::ptrdiff_t>(it - t_.begin()) - 1;
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, std::ssize(t_) - 2));
  }

  std::vector<double> t_;
  std::vector<double> y_;
  std::vector<double> m_;
};

/// x(t) and y(t) splines over t = frame * dt.
struct SplinePair
{
  CubicSpline x;
  CubicSpline y;
};

inline SplinePair fit_spline(const PlanarTrace & trace)
{
  if (trace.size() < 3) {
    throw DomainError("fit_spline: need at least 3 points");
  }
  validate(trace);
  std::vector<double> t, xs, ys;
  t.reserve(trace.size());
  xs.reserve(trace.size());
  ys.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    t.push_back(static_cast<double>(trace.start_frame + static_cast<FrameIndex>(i)) * trace.dt);
    xs.push_back(trace.points[i].x);
    ys.push_back(trace.points[i].y);
  }
  return SplinePair{CubicSpline(t, std::move(xs)), CubicSpline(std::move(t), std::move(ys))};
}

/// Speed and heading per frame from the spline derivatives of a position trace.
/// Below `v_eps` the heading is held at the last confident value (initially `template_state.psi`).
/// Footprint fields are copied from `template_state`.
inline Trajectory derive_profile(
  const PlanarTrace & trace, const AgentState & template_state, double v_eps = 0.1)
{
  const SplinePair sp = fit_spline(trace);
  Trajectory out{trace.start_frame, trace.dt, {}};
  out.states.reserve(trace.size());
  double held = template_state.psi;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double t = static_cast<double>(trace.start_frame + static_cast<FrameIndex>(i)) * trace.dt;
    const double dx = sp.x.derivative(t);
    const double dy = sp.y.derivative(t);
    const double v = std::hypot(dx, dy);
    if (v >= v_eps) {
      held = wrap_angle(std::atan2(dy, dx));
    }
    AgentState s = template_state;
    s.x = trace.points[i].x;
    s.y = trace.points[i].y;
    s.v = v;
    s.psi = held;
    out.states.push_back(s);
  }
  return out;
}

}  // namespace reacsim

#endif  // REACSIM__SPLINE_HPP_
