// Copyright 2026 The hgf Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hgf {

enum class ErrorCode {
  invalid_input,
  quadrature_insufficient,
  simulation_diverged,
  io_error,
  config_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorCode::invalid_input, what) {}
};

// Carries the measured orthonormality defect that tripped the guard.
class QuadratureInsufficient : public Error {
 public:
  QuadratureInsufficient(const std::string& what, double defect)
      : Error(ErrorCode::quadrature_insufficient, what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

class SimulationDiverged : public Error {
 public:
  SimulationDiverged(const std::string& what, std::size_t path, std::size_t step)
      : Error(ErrorCode::simulation_diverged, what), path_(path), step_(step) {}
  std::size_t path() const noexcept { return path_; }
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t path_;
  std::size_t step_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::io_error, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::config_error, what) {}
};

}  // namespace hgf
