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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hgf/hgf.h"

namespace {

std::string slurp(const std::string& path, bool& ok) {
  std::ifstream in(path, std::ios::binary);
  ok = static_cast<bool>(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermite generalized functions: batch experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::int64_t seed = -1;
  std::string out_dir;
  double tol = std::nan("");
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "override the config seed")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--tol", tol, "override the config tolerance");

  std::istringstream names(hgf_command_names());
  for (std::string name; std::getline(names, name);)
    if (!name.empty()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::string config = "{}";
  if (!config_path.empty()) {
    bool ok = false;
    config = slurp(config_path, ok);
    if (!ok) {
      std::cerr << "hgf: cannot read config " << config_path << "\n";
      return 1;
    }
  }

  const std::string command = app.get_subcommands().front()->get_name();
  hgf_run_options opt;
  hgf_run_options_init(&opt);
  opt.command = command.c_str();
  opt.config_json = config.c_str();
  opt.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
  opt.seed = seed;
  opt.tol = tol;
  const int rc = hgf_run(&opt);
  (rc == 0 ? std::cout : std::cerr) << command << ": " << (rc == 0 ? "pass" : rc == 1 ? "error" : "breach") << ": "
                                    << hgf_last_message() << "\n";
  return rc;
}
