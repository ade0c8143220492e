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

// Client side of the external predictor protocol: single-line JSON messages over the child
// process's stdin/stdout, one request in flight at a time.
//
//   -> {"type":"hello","version":1,"dt":0.1,"t_obs":10,"t_horizon":30,"output_kind":"positions"}
//   <- {"type":"ready","output_kind":"positions"}
//   -> {"type":"predict","target":[[x,y,psi,v],...],"neighbors":{"id":[[x,y,psi,v],...]},
//       "map":[[[x,y],...],...]}
//   <- {"type":"prediction","positions":[[x,y],...]}  or  {"type":"prediction","controls":[[..],..]}
//   -> {"type":"bye"}
//
// POSIX only.

#ifndef REACSIM__EXTERNAL_PREDICTOR_HPP_
#define REACSIM__EXTERNAL_PREDICTOR_HPP_

#include "reacsim/core_types.hpp"
#include "reacsim/predictors.hpp"

#include <json.hpp>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace reacsim
{
namespace wire
{

using json = nlohmann::json;

inline constexpr int kVersion = 1;

inline json hello(double dt, int t_obs, int t_horizon, OutputKind kind)
{
  return {{"type", "hello"},  {"version", kVersion}, {"dt", dt},
          {"t_obs", t_obs},   {"t_horizon", t_horizon}, {"output_kind", to_string(kind)}};
}

inline json encode_states(const Trajectory & t)
{
  json arr = json::array();
  for (const auto & s : t.states) {
    arr.push_back({s.x, s.y, s.psi, s.v});
  }
  return arr;
}

inline json predict_request(const ObservationWindow & obs)
{
  json neighbors = json::object();
  for (const auto & [id, traj] : obs.neighbor_histories) {
    neighbors[id] = encode_states(traj);
  }
  json map = json::array();
  if (obs.map != nullptr) {
    for (const auto & pl : obs.map->polylines) {
      json line = json::array();
      for (const auto & p : pl.points) {
        line.push_back({p.x, p.y});
      }
      map.push_back(std::move(line));
    }
  }
  return {{"type", "predict"},
          {"target", encode_states(obs.target_history)},
          {"neighbors", std::move(neighbors)},
          {"map", std::move(map)}};
}

/// Validates a prediction message and converts it. `first_frame` is the frame of the first
/// predicted entry. Throws ProtocolError (without the raw exchange; callers attach it).
inline PredictionOutput parse_prediction(
  const json & msg, OutputKind kind, int horizon, FrameIndex first_frame, double dt)
{
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    throw ProtocolError("response is not a typed JSON object");
  }
  const auto type = msg["type"].get<std::string>();
  if (type == "error") {
    throw ProtocolError("predictor reported error: " + msg.value("msg", std::string{"?"}));
  }
  if (type != "prediction") {
    throw ProtocolError("expected a prediction message, got '" + type + "'");
  }
  const char * key = kind == OutputKind::positions ? "positions" : "controls";
  if (!msg.contains(key) || !msg[key].is_array()) {
    throw ProtocolError(std::string("prediction lacks '") + key + "' array");
  }
  const auto & rows = msg[key];
  if (rows.size() != static_cast<std::size_t>(horizon)) {
    throw ProtocolError(
      "prediction has " + std::to_string(rows.size()) + " entries, expected " +
      std::to_string(horizon));
  }
  PredictionOutput out;
  out.kind = kind;
  out.positions = PlanarTrace{first_frame, dt, {}};
  for (const auto & row : rows) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
      throw ProtocolError("prediction entries must be [number, number]");
    }
    const double a = row[0].get<double>();
    const double b = row[1].get<double>();
    if (!std::isfinite(a) || !std::isfinite(b)) {
      throw ProtocolError("prediction contains non-finite values");
    }
    switch (kind) {
      case OutputKind::positions:
        out.positions.points.push_back({a, b});
        break;
      case OutputKind::bicycle_controls:
        out.bicycle.push_back({a, b});
        break;
      case OutputKind::particle_controls:
        out.particle.push_back({a, b});
        break;
    }
  }
  if (kind != OutputKind::positions) {
    out.positions = {};
  }
  return out;
}

/// Parses one line; malformed JSON (including NaN literals) becomes a ProtocolError.
inline json parse_line(const std::string & line)
{
  try {
    return json::parse(line);
  } catch (const json::parse_error & e) {
    throw ProtocolError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace wire

/// Owns one predictor child process. Not thread-safe: one simulation loop per handle.
class ExternalPredictorHandle
{
public:
  ExternalPredictorHandle(std::vector<std::string> argv, int timeout_ms = 2000)
  : timeout_ms_(timeout_ms)
  {
    if (argv.empty()) {
      throw TransportError("external predictor: empty command");
    }
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
      throw TransportError(std::string("socketpair failed: ") + std::strerror(errno));
    }
    std::vector<char *> cargv;
    for (auto & a : argv) {
      cargv.push_back(a.data());
    }
    cargv.push_back(nullptr);
    pid_ = ::fork();
    if (pid_ < 0) {
      ::close(fds[0]);
      ::close(fds[1]);
      throw TransportError(std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid_ == 0) {
      ::dup2(fds[1], STDIN_FILENO);
      ::dup2(fds[1], STDOUT_FILENO);
      ::execvp(cargv[0], cargv.data());
      ::_exit(127);
    }
    ::close(fds[1]);
    fd_ = fds[0];
  }

  ExternalPredictorHandle(const ExternalPredictorHandle &) = delete;
  ExternalPredictorHandle & operator=(const ExternalPredictorHandle &) = delete;

  ~ExternalPredictorHandle()
  {
    if (fd_ >= 0) {
      try {
        send_line(R"({"type":"bye"})");
      } catch (const Error &) {
      }
      ::shutdown(fd_, SHUT_WR);
    }
    reap();
    if (fd_ >= 0) {
      ::close(fd_);
    }
  }

  /// Split a command line on whitespace (no quoting).
  static std::vector<std::string> split_command(const std::string & cmd)
  {
    std::istringstream in(cmd);
    std::vector<std::string> out;
    for (std::string w; in >> w;) {
      out.push_back(w);
    }
    return out;
  }

  void send_line(const std::string & line)
  {
    std::string buf = line + "\n";
    std::size_t off = 0;
    while (off < buf.size()) {
      const ssize_t n = ::send(fd_, buf.data() + off, buf.size() - off, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError("predictor process closed its input", line);
      }
      off += static_cast<std::size_t>(n);
    }
  }

  /// Reads one newline-terminated line within the timeout.
  std::string read_line(const std::string & request_for_context = {})
  {
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms_);
    while (true) {
      const auto nl = pending_.find('\n');
      if (nl != std::string::npos) {
        std::string line = pending_.substr(0, nl);
        pending_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        throw TimeoutError(
          "no response within " + std::to_string(timeout_ms_) + " ms", request_for_context,
          pending_);
      }
      pollfd p{fd_, POLLIN, 0};
      const int r = ::poll(&p, 1, static_cast<int>(left.count()));
      if (r < 0) {
        if (errno == EINTR) continue;
        throw TransportError(std::string("poll failed: ") + std::strerror(errno));
      }
      if (r == 0) {
        continue;
      }
      char buf[4096];
      const ssize_t n = ::read(fd_, buf, sizeof(buf));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError("read from predictor failed", request_for_context, pending_);
      }
      if (n == 0) {
        throw TransportError("predictor process exited", request_for_context, pending_);
      }
      pending_.append(buf, static_cast<std::size_t>(n));
    }
  }

  /// Sends one request line and returns the response line.
  std::string exchange(const std::string & request)
  {
    send_line(request);
    return read_line(request);
  }

private:
  void reap()
  {
    if (pid_ <= 0) return;
    for (int i = 0; i < 100; ++i) {
      int status = 0;
      const pid_t r = ::waitpid(pid_, &status, WNOHANG);
      if (r == pid_ || r < 0) {
        pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }

  int timeout_ms_;
  pid_t pid_{-1};
  int fd_{-1};
  std::string pending_;
};

/// Predictor backed by an external process speaking the wire protocol.
class ExternalPredictor : public Predictor
{
public:
  ExternalPredictor(
    std::vector<std::string> argv, OutputKind kind, int t_obs, int horizon, double dt,
    int timeout_ms = 2000)
  : handle_(std::move(argv), timeout_ms), kind_(kind), horizon_(horizon), dt_(dt)
  {
    const std::string req = wire::hello(dt, t_obs, horizon, kind).dump();
    const std::string resp = handle_.exchange(req);
    try {
      const auto msg = wire::parse_line(resp);
      if (msg.value("type", std::string{}) != "ready") {
        throw ProtocolError("handshake: expected 'ready'");
      }
      if (msg.value("output_kind", std::string{}) != to_string(kind)) {
        throw ProtocolError("handshake: predictor does not support " + std::string(to_string(kind)));
      }
    } catch (const ProtocolError & e) {
      throw ProtocolError(e.what(), req, resp);
    } catch (const nlohmann::json::exception & e) {
      throw ProtocolError(std::string("handshake: ") + e.what(), req, resp);
    }
  }

  OutputKind output_kind() const override { return kind_; }
  std::string name() const override { return "external"; }

  PredictionOutput predict(const ObservationWindow & obs) override
  {
    const std::string req = wire::predict_request(obs).dump();
    const std::string resp = handle_.exchange(req);
    try {
      return wire::parse_prediction(
        wire::parse_line(resp), kind_, horizon_, obs.current_frame() + 1, dt_);
    } catch (const ProtocolError & e) {
      throw ProtocolError(e.what(), req, resp);
    } catch (const nlohmann::json::exception & e) {
      throw ProtocolError(e.what(), req, resp);
    }
  }

private:
  ExternalPredictorHandle handle_;
  OutputKind kind_;
  int horizon_;
  double dt_;
};

}  // namespace reacsim

#endif  // REACSIM__EXTERNAL_PREDICTOR_HPP_
