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

#include "hgf/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "hgf/error.hpp"
#include "hgf/hermite.hpp"

namespace hgf {

namespace {

constexpr int kMaxNodes = 2000;

// Approximate largest zero of He_M.
double largest_node_estimate(int m) {
  const double s = 2.0 * m + 1.0;
  return std::numbers::sqrt2 * (std::sqrt(s) - 1.85575 * std::pow(s, -1.0 / 6.0));
}

// Newton correction h_M(z) / h_M'(z), computed on a rescaled recurrence so it
// is independent of the e^{-z^2/4} envelope.
double newton_step(int m, double z) {
  double prev = 0.0;
  double cur = 1.0;
  double before = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double next = (z * cur - std::sqrt(static_cast<double>(k)) * prev) /
                        std::sqrt(static_cast<double>(k + 1));
    before = prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      before *= 1e-150;
      prev *= 1e-150;
      cur *= 1e-150;
    }
  }
  // prev = p_M, before = p_{M-1}, cur = p_{M+1}
  const double deriv = 0.5 * (std::sqrt(static_cast<double>(m)) * before -
                              std::sqrt(static_cast<double>(m + 1)) * cur);
  return prev / deriv;
}

QuadRule compute_gauss_hermite(int m) {
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  if (m == 1) {
    rule.nodes[0] = 0.0;
  } else {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd sub(m - 1);
    for (int k = 1; k < m; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    for (int k = 0; k < m; ++k) rule.nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()[k];
  }
  for (double& z : rule.nodes) {
    for (int it = 0; it < 3; ++it) {
      const double step = newton_step(m, z);
      if (!std::isfinite(step)) break;
      z -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
  }
  // Enforce exact symmetry of the node set.
  for (int k = 0; k < m / 2; ++k) {
    const double a = 0.5 * (rule.nodes[static_cast<std::size_t>(m - 1 - k)] - rule.nodes[static_cast<std::size_t>(k)]);
    rule.nodes[static_cast<std::size_t>(k)] = -a;
    rule.nodes[static_cast<std::size_t>(m - 1 - k)] = a;
  }
  if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
  rule.weights.resize(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    rule.weights[k] = 1.0 / hermite_sum_squares(m, rule.nodes[k]);
  }
  rule.exactness_degree = 2 * m - 1;
  rule.halfwidth = rule.nodes.empty() ? 0.0 : std::abs(rule.nodes.front());
  return rule;
}

template <typename Key, typename Value, typename Make>
std::shared_ptr<const Value> cached(std::map<Key, std::shared_ptr<const Value>>& cache, std::mutex& mu,
                                    const Key& key, Make&& make) {
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto value = std::make_shared<const Value>(make());
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key, value);
  return it->second;
}

}  // namespace

double BasisSpec::default_halfwidth(int dim, int level) {
  // The floor keeps the Gaussian tail of the lowest few h_n below ~1e-15.
  return std::max(std::sqrt(2.0 * (4.0 * level + dim)) + 4.0, 9.0);
}

int nodes_to_reach(double radius) {
  int m = 1;
  while (m < kMaxNodes && largest_node_estimate(m) < radius) ++m;
  return m;
}

BasisSpec BasisSpec::make(int dim, int level) {
  BasisSpec s;
  s.dim = dim;
  s.level = level;
  s.halfwidth = default_halfwidth(dim, level);
  s.nodes = std::max(2 * level + 2, nodes_to_reach(s.halfwidth));
  s.validate();
  return s;
}

void BasisSpec::validate() const {
  if (dim < 1) throw InvalidInput("BasisSpec: dim must be >= 1");
  if (level < 0) throw InvalidInput("BasisSpec: level must be >= 0");
  if (nodes < 1 || nodes > kMaxNodes) {
    throw InvalidInput("BasisSpec: node count must be in [1, " + std::to_string(kMaxNodes) + "]");
  }
  if (!(halfwidth > 0.0) || !std::isfinite(halfwidth)) throw InvalidInput("BasisSpec: halfwidth must be positive");
  if (!(defect_tol > 0.0)) throw InvalidInput("BasisSpec: defect tolerance must be positive");
}

BasisSpec BasisSpec::with_level(int new_level) const {
  BasisSpec s = *this;
  const BasisSpec d = make(dim, new_level);
  s.level = new_level;
  s.halfwidth = std::max(halfwidth, d.halfwidth);
  s.nodes = std::max(nodes, d.nodes);
  return s;
}

BasisSpec BasisSpec::widened(double margin) const {
  if (!(margin >= 0.0) || !std::isfinite(margin)) throw InvalidInput("BasisSpec: widening margin must be >= 0");
  BasisSpec s = *this;
  s.halfwidth = halfwidth + margin;
  s.nodes = std::max(nodes, nodes_to_reach(s.halfwidth));
  s.validate();
  return s;
}

std::shared_ptr<const QuadRule> gauss_hermite_rule(int nodes) {
  if (nodes < 1 || nodes > kMaxNodes) throw InvalidInput("gauss_hermite_rule: bad node count");
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const QuadRule>> cache;
  return cached(cache, mu, nodes, [&] { return compute_gauss_hermite(nodes); });
}

double gram_defect(const QuadRule& rule, int level, int dim) {
  const std::size_t n = static_cast<std::size_t>(level) + 1;
  std::vector<double> gram(n * n, 0.0);
  std::vector<double> h(n);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    hermite_funcs(level, rule.nodes[k], h);
    const double w = rule.weights[k];
    for (std::size_t a = 0; a < n; ++a) {
      const double wa = w * h[a];
      for (std::size_t b = a; b < n; ++b) gram[a * n + b] += wa * h[b];
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < a; ++b) gram[a * n + b] = gram[b * n + a];

  double defect1 = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      defect1 = std::max(defect1, std::abs(gram[a * n + b] - (a == b ? 1.0 : 0.0)));
  if (dim == 1 || !std::isfinite(defect1)) return defect1;

  // Tensor Gram entries are products of 1-d entries; enumerate when the box is
  // small, otherwise fall back to the bound (1 + e)^d - 1.
  const double pairs = std::pow(static_cast<double>(n), 2.0 * dim);
  if (pairs > 4e6) return std::pow(1.0 + defect1, dim) - 1.0;
  const std::size_t total = static_cast<std::size_t>(std::pow(static_cast<double>(n), dim));
  std::vector<int> beta(static_cast<std::size_t>(dim));
  double defect = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t r = i;
    for (int ax = dim - 1; ax >= 0; --ax) {
      beta[static_cast<std::size_t>(ax)] = static_cast<int>(r % n);
      r /= n;
    }
    for (std::size_t j = 0; j < total; ++j) {
      std::size_t s = j;
      double prod = 1.0;
      bool diag = true;
      for (int ax = dim - 1; ax >= 0; --ax) {
        const std::size_t g = s % n;
        s /= n;
        prod *= gram[static_cast<std::size_t>(beta[static_cast<std::size_t>(ax)]) * n + g];
        diag = diag && (static_cast<int>(g) == beta[static_cast<std::size_t>(ax)]);
      }
      defect = std::max(defect, std::abs(prod - (diag ? 1.0 : 0.0)));
    }
  }
  return defect;
}

std::shared_ptr<const QuadRule> build_quadrature_unchecked(const BasisSpec& spec) {
  spec.validate();
  using Key = std::tuple<int, double, int, int>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const QuadRule>> cache;
  return cached(cache, mu, Key{spec.nodes, spec.halfwidth, spec.level, spec.dim}, [&] {
    const auto full = gauss_hermite_rule(spec.nodes);
    QuadRule rule;
    for (std::size_t k = 0; k < full->nodes.size(); ++k) {
      if (std::abs(full->nodes[k]) <= spec.halfwidth) {
        rule.nodes.push_back(full->nodes[k]);
        rule.weights.push_back(full->weights[k]);
      }
    }
    rule.exactness_degree = full->exactness_degree;
    rule.halfwidth = spec.halfwidth;
    rule.gram_defect = gram_defect(rule, spec.level, spec.dim);
    return rule;
  });
}

std::shared_ptr<const QuadRule> build_quadrature(const BasisSpec& spec) {
  auto rule = build_quadrature_unchecked(spec);
  if (!(rule->gram_defect <= spec.defect_tol)) {
    throw QuadratureInsufficient("build_quadrature: orthonormality defect " + std::to_string(rule->gram_defect) +
                                     " exceeds tolerance " + std::to_string(spec.defect_tol) + " (dim " +
                                     std::to_string(spec.dim) + ", level " + std::to_string(spec.level) +
                                     ", nodes " + std::to_string(spec.nodes) + ")",
                                 rule->gram_defect);
  }
  return rule;
}

std::shared_ptr<const NormalRule> normal_rule(int nodes) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const NormalRule>> cache;
  return cached(cache, mu, nodes, [&] {
    const auto gh = gauss_hermite_rule(nodes);
    NormalRule r;
    r.nodes = gh->nodes;
    r.weights.resize(gh->nodes.size());
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    double total = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
      r.weights[k] = gh->weights[k] * norm * std::exp(-0.5 * r.nodes[k] * r.nodes[k]);
      total += r.weights[k];
    }
    for (double& w : r.weights) w /= total;
    return r;
  });
}

}  // namespace hgf
