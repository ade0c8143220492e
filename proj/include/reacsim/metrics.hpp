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

// Closed-loop metrics: realism (ADE/FDE, bucketed ADE), collision rate, motion smoothness
// (mean |jerk|), trajectory difference between consecutive predictions, and miss rate.

#ifndef REACSIM__METRICS_HPP_
#define REACSIM__METRICS_HPP_

#include "reacsim/core_types.hpp"
#include "reacsim/sim_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace reacsim
{

/// Half-open absolute frame range.
struct FrameRange
{
  FrameIndex begin{0};
  FrameIndex end{0};
};

namespace detail
{
inline void check_aligned(const Trajectory & a, const Trajectory & b)
{
  if (a.start_frame != b.start_frame || a.size() != b.size()) {
    throw DomainError("trajectories are not frame-aligned");
  }
  if (std::abs(a.dt - b.dt) > 1e-12) {
    throw DomainError("trajectories have different time steps");
  }
}
}  // namespace detail

/// Mean Euclidean distance between aligned trajectories, optionally over a frame range.
inline double ade(
  const Trajectory & simulated, const Trajectory & truth, std::optional<FrameRange> bucket = {})
{
  detail::check_aligned(simulated, truth);
  FrameRange r = bucket.value_or(FrameRange{simulated.start_frame, simulated.end_frame()});
  if (r.begin >= r.end || !simulated.contains(r.begin) || !simulated.contains(r.end - 1)) {
    throw DomainError("ade: bucket outside the trajectories or empty");
  }
  double sum = 0.0;
  for (FrameIndex f = r.begin; f < r.end; ++f) {
    sum += distance(simulated.at_frame(f).position(), truth.at_frame(f).position());
  }
  return sum / static_cast<double>(r.end - r.begin);
}

inline double fde(const Trajectory & simulated, const Trajectory & truth)
{
  if (simulated.empty() || truth.empty()) {
    throw DomainError("fde: empty trajectory");
  }
  detail::check_aligned(simulated, truth);
  return distance(simulated.back().position(), truth.back().position());
}

/// Percentage of runs with at least one collision.
inline double collision_rate(std::span<const SimResult> results)
{
  if (results.empty()) throw DomainError("collision_rate: no results");
  const auto hit = std::count_if(
    results.begin(), results.end(), [](const SimResult & r) { return !r.collisions.empty(); });
  return 100.0 * static_cast<double>(hit) / static_cast<double>(results.size());
}

/// Mean |jerk| from second differences of the speed channel.
inline double motion_smoothness(const Trajectory & t)
{
  if (t.size() < 4) throw DomainError("motion_smoothness: needs at least 4 frames");
  std::vector<double> acc(t.size() - 1);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    acc[i] = (t.states[i + 1].v - t.states[i].v) / t.dt;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < acc.size(); ++i) {
    sum += std::abs((acc[i + 1] - acc[i]) / t.dt);
  }
  return sum / static_cast<double>(acc.size() - 1);
}

/// Mean |jerk| from third differences of the position vector.
inline double motion_smoothness_vector(const Trajectory & t)
{
  if (t.size() < 4) throw DomainError("motion_smoothness_vector: needs at least 4 frames");
  const double dt3 = t.dt * t.dt * t.dt;
  double sum = 0.0;
  for (std::size_t i = 0; i + 3 < t.size(); ++i) {
    const auto & p0 = t.states[i];
    const auto & p1 = t.states[i + 1];
    const auto & p2 = t.states[i + 2];
    const auto & p3 = t.states[i + 3];
    const double jx = (p3.x - 3.0 * p2.x + 3.0 * p1.x - p0.x) / dt3;
    const double jy = (p3.y - 3.0 * p2.y + 3.0 * p1.y - p0.y) / dt3;
    sum += std::hypot(jx, jy);
  }
  return sum / static_cast<double>(t.size() - 3);
}

enum class JerkMode { speed, vector };

inline JerkMode parse_jerk_mode(const std::string & s)
{
  if (s == "speed") return JerkMode::speed;
  if (s == "vector") return JerkMode::vector;
  throw DomainError("unknown jerk mode '" + s + "'");
}

/// Mean over consecutive prediction pairs of the mean squared distance on overlapping frames.
inline double trajectory_difference(std::span<const PlanarTrace> predictions, int t_update)
{
  if (predictions.size() < 2) {
    throw DomainError("trajectory_difference: needs at least 2 predictions");
  }
  const std::size_t len = predictions.front().size();
  if (t_update < 1 || static_cast<std::size_t>(t_update) >= len) {
    throw DomainError("trajectory_difference: predictions do not overlap");
  }
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < predictions.size(); ++k) {
    const auto & a = predictions[k];
    const auto & b = predictions[k + 1];
    if (a.size() != len || b.size() != len) {
      throw DomainError("trajectory_difference: predictions differ in length");
    }
    if (b.start_frame - a.start_frame != t_update) {
      throw DomainError("trajectory_difference: predictions are not offset by t_update");
    }
    double sum = 0.0;
    for (FrameIndex f = b.start_frame; f < a.end_frame(); ++f) {
      const double dx = a.at_frame(f).x - b.at_frame(f).x;
      const double dy = a.at_frame(f).y - b.at_frame(f).y;
      sum += dx * dx + dy * dy;
    }
    total += sum / static_cast<double>(a.end_frame() - b.start_frame);
  }
  return total / static_cast<double>(predictions.size() - 1);
}

/// Lateral threshold plus a speed-dependent longitudinal threshold. `longitudinal` holds
/// (min_speed, threshold) steps; the last step whose min_speed <= v applies.
struct MissThresholds
{
  double lateral{1.0};
  std::vector<std::pair<double, double>> longitudinal{{0.0, 2.0}};

  double longitudinal_at(double v) const
  {
    double thr = longitudinal.empty() ? std::numeric_limits<double>::infinity()
                                      : longitudinal.front().second;
    for (const auto & [min_speed, t] : longitudinal) {
      if (std::abs(v) >= min_speed) thr = t;
    }
    return thr;
  }
};

/// Final-frame miss test in the ground-truth heading frame.
inline bool is_miss(const AgentState & simulated, const AgentState & truth, const MissThresholds & th)
{
  const double dx = simulated.x - truth.x;
  const double dy = simulated.y - truth.y;
  const double c = std::cos(truth.psi);
  const double s = std::sin(truth.psi);
  const double lon = dx * c + dy * s;
  const double lat = -dx * s + dy * c;
  return std::abs(lat) > th.lateral || std::abs(lon) > th.longitudinal_at(truth.v);
}

inline double miss_rate(std::span<const SimResult> results, const MissThresholds & th)
{
  if (results.empty()) throw DomainError("miss_rate: no results");
  std::size_t missed = 0;
  for (const auto & r : results) {
    if (r.simulated.empty() || r.ground_truth.empty()) {
      throw DomainError("miss_rate: result without trajectories");
    }
    if (is_miss(r.simulated.back(), r.ground_truth.back(), th)) ++missed;
  }
  return 100.0 * static_cast<double>(missed) / static_cast<double>(results.size());
}

inline constexpr std::size_t kAdeBuckets = 5;

/// Five consecutive one-second buckets from the start of the trajectory; the fifth absorbs any
/// frames past five seconds. Buckets beyond the trajectory are empty.
inline std::array<std::optional<FrameRange>, kAdeBuckets> ade_buckets(const Trajectory & t)
{
  const auto per = static_cast<FrameIndex>(std::llround(1.0 / t.dt));
  std::array<std::optional<FrameRange>, kAdeBuckets> out{};
  for (std::size_t k = 0; k < kAdeBuckets; ++k) {
    const FrameIndex b = t.start_frame + static_cast<FrameIndex>(k) * per;
    FrameIndex e = (k + 1 == kAdeBuckets) ? t.end_frame() : std::min(b + per, t.end_frame());
    if (b < e) out[k] = FrameRange{b, e};
  }
  return out;
}

/// Metric values of one successful run. NaN marks "not defined for this run".
struct RunMetrics
{
  std::array<double, kAdeBuckets> ade_bucket{};
  double ade{0.0};
  double fde{0.0};
  double ms{0.0};
  double td{0.0};
  bool collided{false};
  bool missed{false};
};

inline RunMetrics compute_run_metrics(
  const SimResult & r, const MissThresholds & th, JerkMode jerk = JerkMode::speed)
{
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  RunMetrics m;
  const auto buckets = ade_buckets(r.simulated);
  for (std::size_t k = 0; k < kAdeBuckets; ++k) {
    m.ade_bucket[k] = buckets[k] ? ade(r.simulated, r.ground_truth, buckets[k]) : nan;
  }
  m.ade = ade(r.simulated, r.ground_truth);
  m.fde = fde(r.simulated, r.ground_truth);
  if (r.simulated.size() >= 4) {
    m.ms = jerk == JerkMode::speed ? motion_smoothness(r.simulated)
                                   : motion_smoothness_vector(r.simulated);
  } else {
    m.ms = nan;
  }
  m.td = r.predictions.size() >= 2 ? trajectory_difference(r.predictions, r.t_update) : nan;
  m.collided = !r.collisions.empty();
  m.missed = is_miss(r.simulated.back(), r.ground_truth.back(), th);
  return m;
}

struct MetricStats
{
  double mean{0.0};
  double std{0.0};
  std::size_t n{0};
};

/// Population mean and standard deviation; NaN entries are skipped.
inline MetricStats summarize(std::span<const double> values)
{
  MetricStats s;
  double sum = 0.0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++s.n;
  }
  if (s.n == 0) {
    s.mean = s.std = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  s.mean = sum / static_cast<double>(s.n);
  double sq = 0.0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sq += (v - s.mean) * (v - s.mean);
  }
  s.std = std::sqrt(sq / static_cast<double>(s.n));
  return s;
}

/// One row of the report. CR and MR are percentages whose mean equals the rate over the
/// setting's successful runs; their std is that of the per-run 0/100 indicator.
struct SettingReport
{
  std::array<MetricStats, kAdeBuckets> ade_bucket{};
  MetricStats ade;
  MetricStats fde;
  MetricStats cr;
  MetricStats ms;
  MetricStats td;
  MetricStats mr;
  std::size_t n_runs{0};
  std::size_t n_failed{0};
};

struct SimReport
{
  std::map<Setting, SettingReport> settings;
};

/// Groups by setting; mean/std are population statistics over runs (scenario x seed).
/// Failed runs only count toward n_runs and n_failed.
inline SimReport aggregate(
  std::span<const SimResult> results, const MissThresholds & th, JerkMode jerk = JerkMode::speed)
{
  std::map<Setting, std::vector<const SimResult *>> groups;
  for (const auto & r : results) groups[r.setting].push_back(&r);
  SimReport report;
  for (const auto & [setting, runs] : groups) {
    SettingReport row;
    row.n_runs = runs.size();
    std::array<std::vector<double>, kAdeBuckets> buckets;
    std::vector<double> ade_v, fde_v, cr_v, ms_v, td_v, mr_v;
    for (const SimResult * r : runs) {
      if (!r->ok()) {
        ++row.n_failed;
        continue;
      }
      const RunMetrics m = compute_run_metrics(*r, th, jerk);
      for (std::size_t k = 0; k < kAdeBuckets; ++k) buckets[k].push_back(m.ade_bucket[k]);
      ade_v.push_back(m.ade);
      fde_v.push_back(m.fde);
      ms_v.push_back(m.ms);
      td_v.push_back(m.td);
      cr_v.push_back(m.collided ? 100.0 : 0.0);
      mr_v.push_back(m.missed ? 100.0 : 0.0);
    }
    for (std::size_t k = 0; k < kAdeBuckets; ++k) row.ade_bucket[k] = summarize(buckets[k]);
    row.ade = summarize(ade_v);
    row.fde = summarize(fde_v);
    row.cr = summarize(cr_v);
    row.ms = summarize(ms_v);
    row.td = summarize(td_v);
    row.mr = summarize(mr_v);
    report.settings[setting] = row;
  }
  return report;
}

}  // namespace reacsim

#endif  // REACSIM__METRICS_HPP_
