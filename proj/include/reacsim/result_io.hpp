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

// Persistence for scenarios (one JSON document per scenario) and simulation results
// (line-delimited JSON: a run header, then one record per frame / prediction / collision).
// Doubles are written in shortest round-trip form, so reading back is bit-exact.

#ifndef REACSIM__RESULT_IO_HPP_
#define REACSIM__RESULT_IO_HPP_

#include "reacsim/core_types.hpp"
#include "reacsim/sim_engine.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace reacsim
{

namespace io
{
using json = nlohmann::json;

inline json state_to_json(const AgentState & s)
{
  return json::array({s.x, s.y, s.psi, s.v, s.length, s.width});
}

inline AgentState state_from_json(const json & j)
{
  if (!j.is_array() || j.size() != 6) throw ParseError("state must be [x,y,psi,v,length,width]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
          j[3].get<double>(), j[4].get<double>(), j[5].get<double>()};
}

inline json trajectory_to_json(const Trajectory & t)
{
  json states = json::array();
  for (const auto & s : t.states) states.push_back(state_to_json(s));
  return {{"start_frame", t.start_frame}, {"dt", t.dt}, {"states", std::move(states)}};
}

inline Trajectory trajectory_from_json(const json & j)
{
  Trajectory t{j.at("start_frame").get<FrameIndex>(), j.at("dt").get<double>(), {}};
  for (const auto & s : j.at("states")) t.states.push_back(state_from_json(s));
  return t;
}

/// Filesystem-safe file stem.
inline std::string safe_stem(const std::string & s)
{
  std::string out = s;
  for (char & c : out) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}
}  // namespace io

inline void write_scenario(std::ostream & out, const Scenario & sc)
{
  using io::json;
  json agents = json::object();
  for (const auto & [id, t] : sc.agents) agents[id] = io::trajectory_to_json(t);
  json doc{{"id", sc.id},
           {"simulated_agent", sc.simulated_agent},
           {"t0", sc.t0},
           {"agents", std::move(agents)}};
  if (sc.map) {
    json pls = json::array();
    for (const auto & pl : sc.map->polylines) {
      json pts = json::array();
      for (const auto & p : pl.points) pts.push_back({p.x, p.y});
      pls.push_back({{"id", pl.id}, {"kind", to_string(pl.kind)}, {"points", std::move(pts)}});
    }
    doc["map"] = std::move(pls);
  }
  out << doc.dump() << '\n';
}

inline Scenario read_scenario(std::istream & in)
{
  using io::json;
  try {
    const json doc = json::parse(in);
    Scenario sc;
    sc.id = doc.at("id").get<std::string>();
    sc.simulated_agent = doc.at("simulated_agent").get<std::string>();
    sc.t0 = doc.at("t0").get<FrameIndex>();
    for (const auto & [id, t] : doc.at("agents").items()) {
      sc.agents[id] = io::trajectory_from_json(t);
    }
    if (doc.contains("map")) {
      MapData map;
      for (const auto & pl : doc["map"]) {
        Polyline p;
        p.id = pl.at("id").get<std::string>();
        const auto kind = pl.at("kind").get<std::string>();
        p.kind = kind == "boundary" ? PolylineKind::boundary : PolylineKind::centerline;
        for (const auto & pt : pl.at("points")) p.points.push_back({pt[0].get<double>(), pt[1].get<double>()});
        map.polylines.push_back(std::move(p));
      }
      sc.map = std::move(map);
    }
    return sc;
  } catch (const json::exception & e) {
    throw ParseError(std::string("scenario file: ") + e.what());
  }
}

namespace fs = std::filesystem;

inline void save_scenarios(const fs::path & dir, const std::vector<Scenario> & scenarios)
{
  fs::create_directories(dir);
  for (const auto & sc : scenarios) {
    std::ofstream out(dir / (io::safe_stem(sc.id) + ".json"));
    if (!out) throw Error("cannot write scenario file in " + dir.string());
    write_scenario(out, sc);
  }
}

/// All *.json files in `dir`, sorted by file name.
inline std::vector<Scenario> load_scenarios(const fs::path & dir)
{
  if (!fs::is_directory(dir)) throw ParseError("scenario directory '" + dir.string() + "' not found");
  std::vector<fs::path> files;
  for (const auto & e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Scenario> out;
  for (const auto & f : files) {
    std::ifstream in(f);
    out.push_back(read_scenario(in));
  }
  return out;
}

inline void write_result(std::ostream & out, const SimResult & r)
{
  using io::json;
  out << json{{"type", "run"},
              {"scenario_id", r.scenario_id},
              {"setting", to_string(r.setting)},
              {"seed", r.seed},
              {"status", r.ok() ? "ok" : "failed"},
              {"error", r.error},
              {"t_update", r.t_update},
              {"dt", r.simulated.dt},
              {"history_start", r.history.start_frame},
              {"t0", r.simulated.start_frame}}
           .dump()
      << '\n';
  for (std::size_t i = 0; i < r.history.size(); ++i) {
    out << json{{"type", "history"},
                {"frame", r.history.start_frame + static_cast<FrameIndex>(i)},
                {"state", io::state_to_json(r.history.states[i])}}
             .dump()
        << '\n';
  }
  for (std::size_t i = 0; i < r.ground_truth.size(); ++i) {
    out << json{{"type", "truth"},
                {"frame", r.ground_truth.start_frame + static_cast<FrameIndex>(i)},
                {"state", io::state_to_json(r.ground_truth.states[i])}}
             .dump()
        << '\n';
  }
  // Predictions and committed frames interleave in simulation order.
  std::size_t frame = 0;
  for (std::size_t k = 0; k < r.predictions.size(); ++k) {
    const auto & p = r.predictions[k];
    json pts = json::array();
    for (const auto & q : p.points) pts.push_back({q.x, q.y});
    out << json{{"type", "prediction"},
                {"iteration", k},
                {"start_frame", p.start_frame},
                {"points", std::move(pts)}}
             .dump()
        << '\n';
    const std::size_t stop = std::min(r.simulated.size(), frame + static_cast<std::size_t>(r.t_update));
    for (; frame < stop; ++frame) {
      const FrameIndex f = r.simulated.start_frame + static_cast<FrameIndex>(frame);
      out << json{{"type", "frame"}, {"frame", f}, {"state", io::state_to_json(r.simulated.states[frame])}}
               .dump()
          << '\n';
      for (const auto & c : r.collisions) {
        if (c.frame == f) {
          out << json{{"type", "collision"}, {"frame", c.frame}, {"agent", c.agent}}.dump() << '\n';
        }
      }
    }
  }
}

inline SimResult read_result(std::istream & in)
{
  using io::json;
  SimResult r;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "run") {
        r.scenario_id = j.at("scenario_id").get<std::string>();
        r.setting = parse_setting(j.at("setting").get<std::string>());
        r.seed = j.at("seed").get<std::uint64_t>();
        r.status = j.at("status").get<std::string>() == "ok" ? RunStatus::ok : RunStatus::failed;
        r.error = j.at("error").get<std::string>();
        r.t_update = j.at("t_update").get<int>();
        const double dt = j.at("dt").get<double>();
        r.history = Trajectory{j.at("history_start").get<FrameIndex>(), dt, {}};
        r.simulated = Trajectory{j.at("t0").get<FrameIndex>(), dt, {}};
        r.ground_truth = Trajectory{r.simulated.start_frame, dt, {}};
        have_header = true;
        continue;
      }
      if (!have_header) throw ParseError("record before run header", line_no);
      if (type == "history") {
        r.history.states.push_back(io::state_from_json(j.at("state")));
      } else if (type == "truth") {
        r.ground_truth.states.push_back(io::state_from_json(j.at("state")));
      } else if (type == "frame") {
        r.simulated.states.push_back(io::state_from_json(j.at("state")));
      } else if (type == "prediction") {
        PlanarTrace p{j.at("start_frame").get<FrameIndex>(), r.simulated.dt, {}};
        for (const auto & q : j.at("points")) p.points.push_back({q[0].get<double>(), q[1].get<double>()});
        r.predictions.push_back(std::move(p));
      } else if (type == "collision") {
        r.collisions.push_back({j.at("frame").get<FrameIndex>(), j.at("agent").get<std::string>()});
      } else {
        throw ParseError("unknown record type '" + type + "'", line_no);
      }
    }
  } catch (const json::exception & e) {
    throw ParseError(std::string("result file: ") + e.what(), line_no);
  }
  if (!have_header) throw ParseError("result file has no run header");
  return r;
}

inline std::string result_file_name(const SimResult & r)
{
  return io::safe_stem(r.scenario_id) + "__" + to_string(r.setting) + "__s" +
         std::to_string(r.seed) + ".jsonl";
}

/// All *.jsonl files in `dir`, sorted by file name.
inline std::vector<SimResult> load_results(const fs::path & dir)
{
  if (!fs::is_directory(dir)) throw ParseError("result directory '" + dir.string() + "' not found");
  std::vector<fs::path> files;
  for (const auto & e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<SimResult> out;
  for (const auto & f : files) {
    std::ifstream in(f);
    out.push_back(read_result(in));
  }
  return out;
}

}  // namespace reacsim

#endif  // REACSIM__RESULT_IO_HPP_
