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

#include "hgf/functions.hpp"

#include <cmath>
#include <map>

#include "hgf/error.hpp"

namespace hgf {

namespace {

double sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

const std::map<std::string, Evaluable>& registry() {
  static const std::map<std::string, Evaluable> r{
      {"gauss", [](std::span<const double> x) { return std::exp(-0.5 * sq(x)); }},
      {"gauss4", [](std::span<const double> x) { return std::exp(-0.25 * sq(x)); }},
      {"x_gauss", [](std::span<const double> x) { return x[0] * std::exp(-0.5 * sq(x)); }},
      {"cos_gauss", [](std::span<const double> x) { return std::cos(x[0]) * std::exp(-0.25 * sq(x)); }},
      {"plateau",
       [](std::span<const double> x) {
         double p = 1.0;
         for (double v : x) p *= 0.5 * (std::erf((v + 16.0) / 2.0) - std::erf((v - 16.0) / 2.0));
         return p;
       }},
  };
  return r;
}

}  // namespace

Evaluable named_function(const std::string& name) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) throw InvalidInput("unknown function '" + name + "'");
  return it->second;
}

std::vector<std::string> function_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

TestFunction named_test(const std::string& name) { return TestFunction{name, named_function(name)}; }

}  // namespace hgf
