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

// Scriptable peer for the external predictor protocol. The first argument picks a behavior:
//   cv       constant-velocity positions, zero controls for control heads
//   short    one entry too few
//   nan      a literal NaN in the payload
//   silent   handshakes, then never answers
//   exit     handshakes, then exits on the first request
//   garbage  answers requests with non-JSON text
//   error    answers requests with an error message
//   badkind  handshakes with a different output kind

#include <json.hpp>

#include <cmath>
#include <iostream>
#include <string>

using json = nlohmann::json;

int main(int argc, char ** argv)
{
  const std::string mode = argc > 1 ? argv[1] : "cv";
  std::string kind = "positions";
  int horizon = 30;
  double dt = 0.1;
  std::string line;
  while (std::getline(std::cin, line)) {
    json msg;
    try {
      msg = json::parse(line);
    } catch (const json::exception &) {
      std::cout << json{{"type", "error"}, {"msg", "malformed request"}}.dump() << std::endl;
      continue;
    }
    const std::string type = msg.value("type", "");
    if (type == "bye") return 0;
    if (type == "hello") {
      kind = msg.value("output_kind", "positions");
      horizon = msg.value("t_horizon", 30);
      dt = msg.value("dt", 0.1);
      const std::string echoed = mode == "badkind" ? (kind == "positions" ? "bicycle_controls" : "positions") : kind;
      std::cout << json{{"type", "ready"}, {"output_kind", echoed}}.dump() << std::endl;
      continue;
    }
    if (type != "predict") {
      std::cout << json{{"type", "error"}, {"msg", "unknown message type"}}.dump() << std::endl;
      continue;
    }
    if (mode == "silent") continue;
    if (mode == "exit") return 3;
    if (mode == "garbage") {
      std::cout << "this is not json" << std::endl;
      continue;
    }
    if (mode == "error") {
      std::cout << json{{"type", "error"}, {"msg", "model failed"}}.dump() << std::endl;
      continue;
    }
    const auto & target = msg.at("target");
    const auto & cur = target.back();
    const double x = cur[0], y = cur[1], psi = cur[2], v = cur[3];
    const double vx = v * std::cos(psi), vy = v * std::sin(psi);
    const int n = mode == "short" ? horizon - 1 : horizon;
    json rows = json::array();
    for (int k = 1; k <= n; ++k) {
      const double t = k * dt;
      if (kind == "positions") {
        rows.push_back({x + vx * t, y + vy * t});
      } else {
        rows.push_back({0.0, 0.0});
      }
    }
    const std::string key = kind == "positions" ? "positions" : "controls";
    std::string out = json{{"type", "prediction"}, {key, rows}}.dump();
    if (mode == "nan") {
      // JSON has no NaN; emit the literal a careless Python json.dumps would produce.
      std::string body = rows.dump();
      body.replace(1, body.find(']'), "[NaN,0.0]");
      out = R"({"type":"prediction",")" + key + "\":" + body + "}";
    }
    std::cout << out << std::endl;
  }
  return 0;
}
