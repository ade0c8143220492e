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

// Track CSV (one row per agent per frame) and the line-oriented polyline map format.

#ifndef REACSIM__DATA_INGEST_HPP_
#define REACSIM__DATA_INGEST_HPP_

#include "reacsim/core_types.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace reacsim
{

struct TrackRecord
{
  std::string case_id;
  std::string track_id;
  std::int64_t frame_id{0};
  std::int64_t timestamp_ms{0};
  std::string agent_type;
  double x{0.0};
  double y{0.0};
  double vx{0.0};
  double vy{0.0};
  double psi_rad{0.0};
  double length{0.0};
  double width{0.0};

  friend bool operator==(const TrackRecord &, const TrackRecord &) = default;
};

inline constexpr std::array<std::string_view, 12> kTrackColumns{
  "case_id", "track_id", "frame_id", "timestamp_ms", "agent_type", "x",
  "y",       "vx",       "vy",       "psi_rad",      "length",     "width"};

/// Shortest decimal string that parses back to exactly `v`.
inline std::string format_double(double v)
{
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace detail
{
inline std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T & out)
{
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}
}  // namespace detail

inline AgentState to_agent_state(const TrackRecord & r)
{
  return AgentState{r.x, r.y, wrap_angle(r.psi_rad), std::hypot(r.vx, r.vy), r.length, r.width};
}

/// Reads a track CSV. Columns are located by header name, so extra columns are ignored.
inline std::vector<TrackRecord> parse_tracks(std::istream & in)
{
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::trim(line).empty()) {
      break;
    }
  }
  if (detail::trim(line).empty()) {
    throw ParseError("empty track file");
  }
  const auto header = detail::split(line, ',');
  std::array<std::size_t, kTrackColumns.size()> col{};
  for (std::size_t c = 0; c < kTrackColumns.size(); ++c) {
    const auto it = std::find(header.begin(), header.end(), kTrackColumns[c]);
    if (it == header.end()) {
      throw ParseError("missing column '" + std::string(kTrackColumns[c]) + "'", line_no);
    }
    col[c] = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<TrackRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) {
      continue;
    }
    const auto cells = detail::split(line, ',');
    if (cells.size() < header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " cells", line_no);
    }
    TrackRecord r;
    r.case_id = std::string(cells[col[0]]);
    r.track_id = std::string(cells[col[1]]);
    r.agent_type = std::string(cells[col[4]]);
    auto num = [&](std::size_t c, auto & out) {
      if (!detail::parse_number(cells[col[c]], out)) {
        throw ParseError(
          "cannot parse " + std::string(kTrackColumns[c]) + " value '" + std::string(cells[col[c]]) +
            "'",
          line_no);
      }
    };
    num(2, r.frame_id);
    num(3, r.timestamp_ms);
    num(5, r.x);
    num(6, r.y);
    num(7, r.vx);
    num(8, r.vy);
    num(9, r.psi_rad);
    num(10, r.length);
    num(11, r.width);
    for (double v : {r.x, r.y, r.vx, r.vy, r.psi_rad, r.length, r.width}) {
      if (!std::isfinite(v)) {
        throw ParseError("non-finite numeric cell", line_no);
      }
    }
    if (!(r.length > 0.0) || !(r.width > 0.0)) {
      throw ParseError("length and width must be positive", line_no);
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) {
    throw ParseError("no data rows");
  }
  return records;
}

inline std::vector<TrackRecord> parse_tracks(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open track file '" + path + "'");
  }
  return parse_tracks(in);
}

inline void serialize_tracks(std::ostream & out, const std::vector<TrackRecord> & records)
{
  for (std::size_t c = 0; c < kTrackColumns.size(); ++c) {
    out << (c ? "," : "") << kTrackColumns[c];
  }
  out << '\n';
  for (const auto & r : records) {
    out << r.case_id << ',' << r.track_id << ',' << r.frame_id << ',' << r.timestamp_ms << ','
        << r.agent_type << ',' << format_double(r.x) << ',' << format_double(r.y) << ','
        << format_double(r.vx) << ',' << format_double(r.vy) << ',' << format_double(r.psi_rad)
        << ',' << format_double(r.length) << ',' << format_double(r.width) << '\n';
  }
}

/// Contiguous log segments per (case, agent). A track with frame gaps splits into several
/// segments; the first keeps the track id, later ones get "<track>_seg<k>".
using CaseLogs = std::map<std::string, std::map<std::string, Trajectory>>;

inline CaseLogs group_tracks(const std::vector<TrackRecord> & records, double dt = kDefaultDt)
{
  std::map<std::pair<std::string, std::string>, std::vector<const TrackRecord *>> by_track;
  for (const auto & r : records) {
    by_track[{r.case_id, r.track_id}].push_back(&r);
  }
  CaseLogs out;
  for (auto & [key, rows] : by_track) {
    std::stable_sort(rows.begin(), rows.end(), [](const TrackRecord * a, const TrackRecord * b) {
      return a->frame_id < b->frame_id;
    });
    auto & agents = out[key.first];
    int segment = 0;
    Trajectory current{rows.front()->frame_id, dt, {}};
    auto flush = [&]() {
      const std::string id =
        segment == 0 ? key.second : key.second + "_seg" + std::to_string(segment);
      agents[id] = std::move(current);
      ++segment;
    };
    for (const TrackRecord * r : rows) {
      if (!current.states.empty() && r->frame_id != current.end_frame()) {
        if (r->frame_id == current.end_frame() - 1) {
          continue;  // duplicate frame
        }
        flush();
        current = Trajectory{r->frame_id, dt, {}};
      }
      current.states.push_back(to_agent_state(*r));
    }
    flush();
  }
  return out;
}

struct BuildReport
{
  std::size_t emitted{0};
  std::size_t skipped{0};
  std::vector<std::string> skipped_agents;  // "<case>/<agent>"
};

/// One scenario per (case, agent segment) with at least t_obs + t_sim frames. The simulated
/// agent starts at t0 = first frame + t_obs; every other segment in the case is attached for
/// replay. `min_track_len` raises the coverage requirement further when larger.
inline std::vector<Scenario> build_scenarios(
  const std::vector<TrackRecord> & records, int t_obs, int t_sim, int min_track_len = 0,
  BuildReport * report = nullptr, double dt = kDefaultDt)
{
  if (t_obs <= 0 || t_sim <= 0) {
    throw DomainError("build_scenarios: t_obs and t_sim must be positive");
  }
  const auto needed = static_cast<std::size_t>(std::max(t_obs + t_sim, min_track_len));
  BuildReport local;
  std::vector<Scenario> out;
  for (auto & [case_id, agents] : group_tracks(records, dt)) {
    for (const auto & [agent_id, log] : agents) {
      if (log.size() < needed) {
        ++local.skipped;
        local.skipped_agents.push_back(case_id + "/" + agent_id);
        continue;
      }
      Scenario sc;
      sc.id = case_id + "_" + agent_id;
      sc.agents = agents;
      sc.simulated_agent = agent_id;
      sc.t0 = log.start_frame + t_obs;
      out.push_back(std::move(sc));
      ++local.emitted;
    }
  }
  if (report) {
    *report = std::move(local);
  }
  return out;
}

inline MapData parse_map(std::istream & in)
{
  MapData map;
  std::string line;
  std::size_t line_no = 0;
  Polyline * open = nullptr;
  std::size_t open_line = 0;
  auto close = [&]() {
    if (open && open->points.size() < 2) {
      throw ParseError("polyline '" + open->id + "' has fewer than 2 points", open_line);
    }
    open = nullptr;
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = detail::trim(line);
    if (t.empty()) {
      close();
      continue;
    }
    std::istringstream ls{std::string(t)};
    std::string first;
    ls >> first;
    if (first == "polyline") {
      close();
      std::string id, kind, extra;
      if (!(ls >> id >> kind) || (ls >> extra)) {
        throw ParseError("expected 'polyline <id> <kind>'", line_no);
      }
      Polyline pl;
      pl.id = id;
      if (kind == "centerline") {
        pl.kind = PolylineKind::centerline;
      } else if (kind == "boundary") {
        pl.kind = PolylineKind::boundary;
      } else {
        throw ParseError("unknown polyline kind '" + kind + "'", line_no);
      }
      map.polylines.push_back(std::move(pl));
      open = &map.polylines.back();
      open_line = line_no;
      continue;
    }
    if (!open) {
      throw ParseError("point outside a polyline block", line_no);
    }
    std::string ys, extra;
    double x = 0.0, y = 0.0;
    if (
      !(ls >> ys) || (ls >> extra) || !detail::parse_number(first, x) ||
      !detail::parse_number(ys, y) || !std::isfinite(x) || !std::isfinite(y)) {
      throw ParseError("expected '<x> <y>'", line_no);
    }
    open->points.push_back({x, y});
  }
  close();
  return map;
}

inline MapData parse_map(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open map file '" + path + "'");
  }
  return parse_map(in);
}

inline void serialize_map(std::ostream & out, const MapData & map)
{
  for (const auto & pl : map.polylines) {
    out << "polyline " << pl.id << ' ' << to_string(pl.kind) << '\n';
    for (const auto & p : pl.points) {
      out << format_double(p.x) << ' ' << format_double(p.y) << '\n';
    }
    out << '\n';
  }
}

/// Seeded uniform subset of `n` indices out of `total`, in ascending order.
inline std::vector<std::size_t> sample_indices(std::size_t total, std::size_t n, std::uint64_t seed)
{
  std::vector<std::size_t> idx(total);
  for (std::size_t i = 0; i < total; ++i) {
    idx[i] = i;
  }
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates with an explicit bounded draw, so the subset does not depend on the
  // standard library's shuffle implementation.
  const std::size_t k = std::min(n, total);
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t span = total - i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t r = rng();
    while (r >= limit) {
      r = rng();
    }
    std::swap(idx[i], idx[i + r % span]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace reacsim

#endif  // REACSIM__DATA_INGEST_HPP_
