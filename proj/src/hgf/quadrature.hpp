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

#include <memory>
#include <span>
#include <vector>

namespace hgf {

inline constexpr double kDefaultDefectTolerance = 1e-9;

// Which finite Hermite system is in play: dimension, box level and the 1-d
// quadrature used per axis (tensor product in d > 1).
struct BasisSpec {
  int dim = 1;
  int level = 0;
  int nodes = 2;          // Gauss-Hermite node count M per axis
  double halfwidth = 1.0; // truncation radius L; nodes beyond it are dropped
  double defect_tol = kDefaultDefectTolerance;

  // Defaults: L = max(sqrt(2(4N+d)) + 4, 9), M = max(2N+2, count whose nodes reach L).
  static BasisSpec make(int dim, int level);
  static double default_halfwidth(int dim, int level);

  void validate() const;

  // Same spec with a larger box; node count and window grow to the defaults
  // of the new level when those exceed the current ones.
  BasisSpec with_level(int new_level) const;
  // Window widened by `margin`, node count raised so the rule still reaches it.
  BasisSpec widened(double margin) const;

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

/// Smallest Gauss-Hermite node count whose largest node is >= radius.
int nodes_to_reach(double radius);

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // Lebesgue weights: sum w_k g(x_k) ~ int g dx
  int exactness_degree = 0;     // exact for p(x) e^{-x^2/2}, deg p <= this
  double halfwidth = 0.0;
  double gram_defect = 0.0;     // max |G - I| over the d-dim box of the BasisSpec
};

/// Probabilists' Gauss-Hermite rule with M nodes, weights converted to plain
/// Lebesgue weights W_k = 1 / sum_{n<M} h_n(z_k)^2. Cached per M.
std::shared_ptr<const QuadRule> gauss_hermite_rule(int nodes);

/// Max |G - I| where G is the d-dim Gram matrix of h_beta, beta in {0..level}^d,
/// under the tensor-product rule.
double gram_defect(const QuadRule& rule, int level, int dim);

/// Rule for spec: Gauss-Hermite truncated to [-L, L], defect measured and
/// checked against spec.defect_tol. Throws QuadratureInsufficient otherwise.
std::shared_ptr<const QuadRule> build_quadrature(const BasisSpec& spec);

/// As build_quadrature but never throws on defect (used by diagnostics).
std::shared_ptr<const QuadRule> build_quadrature_unchecked(const BasisSpec& spec);

/// Standard-normal expectation rule: sum w_j g(z_j) ~ E g(Z), Z ~ N(0,1).
/// Weights sum to one.
struct NormalRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
std::shared_ptr<const NormalRule> normal_rule(int nodes);

}  // namespace hgf
