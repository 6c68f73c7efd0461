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

// Finite sections of the coefficient spaces s_d (rapid decay) and s'_d
// (polynomial growth): the analysis map f -> (int f h_beta)_beta, box partial
// sums, the weighted norms |.|_n and their duals, and the coefficient pairing.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "hgf/hermite.hpp"
#include "hgf/quadrature.hpp"

namespace hgf {

using Evaluable = std::function<double(std::span<const double>)>;

// Coefficients a_beta on the box {0..levels[0]} x ... x {0..levels[d-1]}.
// Degree-raising operations may grow one axis only, so the box is allowed to
// be anisotropic; spec().level is always the largest axis level.
class CoeffTensor {
 public:
  explicit CoeffTensor(BasisSpec spec);
  CoeffTensor(BasisSpec spec, std::vector<int> levels);
  CoeffTensor(BasisSpec spec, std::vector<int> levels, std::vector<double> values);

  static CoeffTensor unit(const BasisSpec& spec, const MultiIndex& beta);

  const BasisSpec& spec() const noexcept { return spec_; }
  int dim() const noexcept { return spec_.dim; }
  std::span<const int> levels() const noexcept { return levels_; }
  int level(int axis) const { return levels_.at(static_cast<std::size_t>(axis)); }
  std::size_t size() const noexcept { return values_.size(); }
  std::vector<std::size_t> shape() const;

  std::span<const double> values() const& noexcept { return values_; }
  std::span<double> values() & noexcept { return values_; }
  std::vector<double> values() && noexcept { return std::move(values_); }

  std::size_t offset(std::span<const int> beta) const;
  MultiIndex index_of(std::size_t flat) const;
  double at(const MultiIndex& beta) const { return values_[offset(beta.entries())]; }
  double& at(const MultiIndex& beta) { return values_[offset(beta.entries())]; }

  bool same_box(const CoeffTensor& other) const noexcept {
    return spec_.dim == other.spec_.dim && levels_ == other.levels_;
  }
  // Truncates or zero-pads to the new box; quadrature settings follow with_level.
  CoeffTensor resized(std::vector<int> levels) const;
  CoeffTensor resized(int level) const;
  // Same coefficients carried under a different quadrature configuration.
  CoeffTensor with_spec(const BasisSpec& spec) const;

  CoeffTensor& operator+=(const CoeffTensor& other);
  CoeffTensor& operator-=(const CoeffTensor& other);
  CoeffTensor& operator*=(double s);
  void axpy(double a, const CoeffTensor& x);

  friend CoeffTensor operator+(CoeffTensor a, const CoeffTensor& b) { return a += b; }
  friend CoeffTensor operator-(CoeffTensor a, const CoeffTensor& b) { return a -= b; }
  friend CoeffTensor operator*(double s, CoeffTensor a) { return a *= s; }

 private:
  BasisSpec spec_;
  std::vector<int> levels_;
  std::vector<double> values_;
};

// Tensor-product node grid of a quadrature rule, with cached basis matrices.
class NodeGrid {
 public:
  explicit NodeGrid(const BasisSpec& spec);  // checked rule (throws on defect)
  NodeGrid(const BasisSpec& spec, std::shared_ptr<const QuadRule> rule);

  const BasisSpec& spec() const noexcept { return spec_; }
  const QuadRule& rule() const noexcept { return *rule_; }
  int dim() const noexcept { return spec_.dim; }
  std::size_t points_per_axis() const noexcept { return rule_->nodes.size(); }
  std::size_t size() const noexcept;
  std::vector<std::size_t> shape() const;
  void point(std::size_t flat, std::span<double> x) const;
  double weight(std::size_t flat) const;

  // Grid values -> coefficients on the requested box.
  CoeffTensor analyze(std::span<const double> grid_values, std::vector<int> levels) const;
  // Coefficients -> values of the box partial sum at the grid points.
  std::vector<double> synthesize(const CoeffTensor& a) const;
  // Values of the partial sum of `a` at (node - shift) for every grid node.
  std::vector<double> synthesize_shifted(const CoeffTensor& a, std::span<const double> shift) const;
  // sum_q w_q u(x_q) phi(x_q), the quadrature pairing of grid values.
  double integrate(std::span<const double> u, std::span<const double> phi) const;
  std::vector<double> sample(const Evaluable& f) const;

 private:
  BasisSpec spec_;
  std::shared_ptr<const QuadRule> rule_;
};

/// a_beta = sum_k w_k f(x_k) h_beta(x_k).
CoeffTensor analyze(const Evaluable& f, const BasisSpec& spec);

/// sum_{gamma <= level} a_gamma h_gamma(x).
double synthesize(const CoeffTensor& a, std::span<const double> x, const MultiIndex& level);
double synthesize(const CoeffTensor& a, std::span<const double> x);

/// |a|_n = (sum (2|beta|+d)^{2n} a_beta^2)^{1/2}.
double seminorm(const CoeffTensor& a, int n);

struct DualNormReport {
  double value = 0.0;
  std::vector<double> partial_sums;  // value restricted to box level k, k = 0..max
};
/// ||b||_{-n} = (sum (2|beta|+d)^{-2n} b_beta^2)^{1/2}, n >= 1.
DualNormReport dual_norm(const CoeffTensor& b, int n);

/// sum_beta b_beta a_beta; boxes must agree.
double pairing(const CoeffTensor& b, const CoeffTensor& a);

struct GrowthProfile {
  double C = 0.0;
  int m = 0;
  double residual = 0.0;  // outer-half / inner-half weighted maximum at m
};
/// Empirical (C, m) with |b_beta| <= C (2|beta|+d)^m on every stored index.
GrowthProfile growth_order(const CoeffTensor& b, double plateau_factor = 1.5);

/// CSV with header beta_1,...,beta_d,value in lexicographic order.
void write_coeff_csv(const CoeffTensor& a, const std::filesystem::path& path);
std::string coeff_csv_string(const CoeffTensor& a);
/// Rejects duplicate indices; indices absent from the file read as zero.
/// Quadrature settings default to BasisSpec::make for the file's box.
CoeffTensor read_coeff_csv(const std::filesystem::path& path);
CoeffTensor parse_coeff_csv(const std::string& text);

}  // namespace hgf
