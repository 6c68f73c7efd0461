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

// Config-driven batch commands. A config is a JSON object whose keys are
// validated per command; unknown keys are rejected. Every command writes its
// CSV tables into the output directory and reports an exit status:
//   0 pass, 1 usage or config error, 2 numerical criterion breach.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hgf {

enum class ExitStatus : int { pass = 0, config_error = 1, breach = 2 };

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> tol;
};

struct CommandResult {
  ExitStatus status = ExitStatus::pass;
  std::string message;                       // one-line summary or error text
  std::vector<std::filesystem::path> files;  // outputs written
};

std::vector<std::string> command_names();

/// Runs `command` (or the config's `command` field when empty) on the JSON
/// text. Never throws: errors map to exit statuses.
CommandResult run_command(const std::string& command, const std::string& config_json, const Overrides& ov = {});

}  // namespace hgf
