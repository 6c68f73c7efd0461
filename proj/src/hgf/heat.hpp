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

// Cauchy problem u_t = 1/2 Lap u + g, u_0 = f, solved representative-wise:
// by Monte Carlo, u(t) = E tau_{B_t} f + E int_0^t tau_{B_r} g(t - r) dr, and
// by a deterministic heat-kernel convolution used as the oracle.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "hgf/gen_func.hpp"

namespace hgf {

struct HeatProblem {
  DistributionSpec initial;
  std::optional<GenFuncRep> source;  // static or C0
  double horizon = 1.0;
  int dim = 1;
};

enum class HeatMethod { mc, spectral };
const char* to_string(HeatMethod m);

struct HeatSolution {
  std::vector<double> times;
  std::vector<GenFuncRep> reps;            // static, one per time, sharing one BasisSpec
  HeatMethod method = HeatMethod::spectral;
  std::vector<CoeffTensor> mc_se;          // per-coefficient standard errors (mc only)
  std::vector<std::string> tracked_ids;    // functionals estimated path by path (mc only)
  std::vector<std::vector<double>> tracked_value, tracked_se;  // [time][functional]
  std::optional<GenFuncRep> source;
};

struct McOptions {
  std::size_t n_paths = 10000;
  std::uint64_t seed = 0;
  double source_step = 0.01;           // left-point step for the source integral
  std::vector<TestFunction> tracked;   // pairings estimated with their own standard errors
};

struct Expectation {
  GenFuncRep mean;
  CoeffTensor se;
};

/// Average of tau_{X_k} f over the samples: node values averaged, analyzed once.
Expectation expectation_translated(const GenFuncRep& f, const std::vector<std::vector<double>>& samples);

HeatSolution solve_mc(const HeatProblem& p, const BasisSpec& spec, std::vector<double> times, const McOptions& opt);
HeatSolution solve_spectral(const HeatProblem& p, const BasisSpec& spec, std::vector<double> times);

/// G_t * a on the rule of `spec`, t >= 0 (identity below 1e-6).
CoeffTensor heat_convolve(const CoeffTensor& a, double t);

/// |<d_t u(t) - 1/2 Lap u(t) - g(t), phi>| with a central difference over the
/// neighbouring stored times.
double pde_residual(const HeatSolution& sol, const Evaluable& phi, double t);

struct UniquenessReport {
  std::vector<double> times;
  std::vector<AssociationReport> reports;
  bool verdict = false;
};
UniquenessReport uniqueness_probe(const HeatSolution& a, const HeatSolution& b, const std::vector<TestFunction>& tests,
                                  const std::vector<int>& levels, double tol = kDefaultAssociationTolerance);

/// One GenFuncRep file set per stored time: <stem>_<k>.
void save_solution(const HeatSolution& sol, const std::filesystem::path& stem);

}  // namespace hgf
