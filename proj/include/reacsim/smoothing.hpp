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

#ifndef REACSIM__SMOOTHING_HPP_
#define REACSIM__SMOOTHING_HPP_

#include "reacsim/core_types.hpp"

#include <cmath>
#include <optional>
#include <utility>

namespace reacsim
{

/// Per-agent state of the weighted-average smoothing layer.
class SmootherState
{
public:
  explicit SmootherState(double alpha = 0.2) : alpha_(alpha)
  {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
      throw DomainError("smoothing alpha must lie in [0, 1)");
    }
  }

  double alpha() const noexcept { return alpha_; }
  const std::optional<PlanarTrace> & last_weighted() const noexcept { return last_weighted_; }

private:
  friend std::pair<SmootherState, PlanarTrace> smooth_update(
    const SmootherState &, const PlanarTrace &);

  double alpha_;
  std::optional<PlanarTrace> last_weighted_;
};

/// Blends a new prediction with the previous weighted trace:
///   out[f] = (1 - alpha) * predicted[f] + alpha * last_weighted[f]
/// on frames both traces cover. Frames only the prediction covers pass through unchanged.
/// The first call returns the prediction as is. The returned state remembers the output.
inline std::pair<SmootherState, PlanarTrace> smooth_update(
  const SmootherState & state, const PlanarTrace & predicted)
{
  validate(predicted);
  SmootherState next = state;
  PlanarTrace out = predicted;
  if (state.last_weighted_) {
    const auto & prev = *state.last_weighted_;
    if (prev.start_frame > predicted.start_frame) {
      throw DomainError("smooth_update: prediction starts before the stored weighted trace");
    }
    if (std::abs(prev.dt - predicted.dt) > 1e-12 * predicted.dt) {
      throw DomainError("smooth_update: frame grids differ (dt mismatch)");
    }
    const double a = state.alpha_;
    for (std::size_t i = 0; i < out.points.size(); ++i) {
      const FrameIndex f = predicted.start_frame + static_cast<FrameIndex>(i);
      if (!prev.contains(f)) {
        continue;
      }
      const Point2 & w = prev.at_frame(f);
      // p + a (w - p): identical inputs stay exactly fixed.
      out.points[i].x = predicted.points[i].x + a * (w.x - predicted.points[i].x);
      out.points[i].y = predicted.points[i].y + a * (w.y - predicted.points[i].y);
    }
  }
  next.last_weighted_ = out;
  return {std::move(next), std::move(out)};
}

}  // namespace reacsim

#endif  // REACSIM__SMOOTHING_HPP_
