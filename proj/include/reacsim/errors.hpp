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

#ifndef REACSIM__ERRORS_HPP_
#define REACSIM__ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace reacsim
{

/// Base for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (bad angle, empty sequence, ...).
class DomainError : public Error
{
public:
  using Error::Error;
};

/// Numerical blow-up: an operation produced NaN or Inf.
class NumericError : public Error
{
public:
  using Error::Error;
};

/// Malformed input file. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error
{
public:
  ParseError(const std::string & msg, std::size_t line = 0)
  : Error(line == 0 ? msg : "line " + std::to_string(line) + ": " + msg), line_(line)
  {
  }
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Failure talking to a predictor. Carries the raw request/response for post-mortem.
class PredictorError : public Error
{
public:
  PredictorError(const std::string & msg, std::string request = {}, std::string response = {})
  : Error(msg), request_(std::move(request)), response_(std::move(response))
  {
  }
  const std::string & request() const noexcept { return request_; }
  const std::string & response() const noexcept { return response_; }

private:
  std::string request_;
  std::string response_;
};

class ProtocolError : public PredictorError
{
public:
  using PredictorError::PredictorError;
};

class TimeoutError : public PredictorError
{
public:
  using PredictorError::PredictorError;
};

class TransportError : public PredictorError
{
public:
  using PredictorError::PredictorError;
};

}  // namespace reacsim

#endif  // REACSIM__ERRORS_HPP_
