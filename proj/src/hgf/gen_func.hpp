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

// Tempered generalized functions at finite truncation. A representative
// family (f_beta) is stored as ONE coefficient tensor at the top level; the
// members of the family are its box partial sums. Time-dependent elements
// (classes C0 / C1) carry one tensor per node of a time grid, interpolated
// piecewise-linearly.

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hgf/coeff_space.hpp"

namespace hgf {

enum class TimeClass { static_element, c0, c1 };

const char* to_string(TimeClass c);
TimeClass time_class_from_string(const std::string& s);

struct TestFunction {
  std::string id;
  Evaluable fn;
};

class DistributionSpec {
 public:
  enum class Kind { dirac, dirac_derivative, sampled_function, coefficient_list, combination };

  static DistributionSpec dirac(std::vector<double> point);
  // -d/dx_axis of the Dirac mass: T(phi) = -(d phi / dx_axis)(point) ... with the
  // distributional sign, T(h_gamma) = -h_gamma'(point).
  static DistributionSpec dirac_derivative(std::vector<double> point, int axis);
  static DistributionSpec sampled(Evaluable f, int dim = 1);
  static DistributionSpec coefficients(CoeffTensor a);
  static DistributionSpec combination(std::vector<std::pair<double, DistributionSpec>> terms);

  Kind kind() const noexcept { return kind_; }
  int dim() const;
  std::span<const double> point() const noexcept { return point_; }
  int axis() const noexcept { return axis_; }
  const Evaluable& function() const noexcept { return function_; }
  const CoeffTensor& coeffs() const { return *coeffs_; }
  const std::vector<std::pair<double, DistributionSpec>>& terms() const noexcept { return terms_; }

 private:
  Kind kind_ = Kind::dirac;
  std::vector<double> point_;
  int axis_ = 0;
  int dim_ = 1;
  Evaluable function_;
  std::optional<CoeffTensor> coeffs_;
  std::vector<std::pair<double, DistributionSpec>> terms_;
};

class GenFuncRep {
 public:
  explicit GenFuncRep(CoeffTensor coeffs);
  // C0: node tensors, interpolated linearly. C1: additionally explicit time
  // derivatives per node; when omitted they are the interpolant's slopes.
  GenFuncRep(TimeClass cls, std::vector<double> time_grid, std::vector<CoeffTensor> values,
             std::vector<CoeffTensor> derivatives = {});

  TimeClass time_class() const noexcept { return class_; }
  bool is_static() const noexcept { return class_ == TimeClass::static_element; }
  const BasisSpec& spec() const noexcept { return values_.front().spec(); }
  int dim() const noexcept { return spec().dim; }
  std::span<const int> levels() const noexcept { return values_.front().levels(); }

  // The tensor of a static element (throws for time-dependent ones).
  const CoeffTensor& coeffs() const&;
  CoeffTensor coeffs() &&;
  std::span<const double> time_grid() const noexcept { return time_grid_; }
  const std::vector<CoeffTensor>& node_values() const noexcept { return values_; }
  const std::vector<CoeffTensor>& node_derivatives() const noexcept { return derivatives_; }

  CoeffTensor at_time(double t) const;
  // Derivative of the piecewise-linear interpolant (right-hand slope at
  // nodes), consistent with at_time; zero for static elements. The stored
  // node derivatives of a C1 element are reported as data only.
  CoeffTensor time_derivative(double t) const;

  // Member of the family at box level `level` (truncation of every tensor).
  GenFuncRep partial(int level) const;
  double evaluate(std::span<const double> x, double t = 0.0) const;

  // Applies fn to every stored tensor (values and derivatives).
  GenFuncRep map(const std::function<CoeffTensor(const CoeffTensor&)>& fn) const;

 private:
  std::size_t locate(double t) const;

  TimeClass class_ = TimeClass::static_element;
  std::vector<double> time_grid_;
  std::vector<CoeffTensor> values_;
  std::vector<CoeffTensor> derivatives_;
};

/// iota(T): coefficients T(h_gamma) on the box of spec.
GenFuncRep embed(const DistributionSpec& t, const BasisSpec& spec);
CoeffTensor embed_coeffs(const DistributionSpec& t, const BasisSpec& spec);

/// Product of level-N partial sums, re-expanded at level 2N.
GenFuncRep multiply(const GenFuncRep& f, const GenFuncRep& g);

/// d^alpha by repeated ladder derivatives; each axis level grows by alpha_i.
GenFuncRep differentiate(const GenFuncRep& f, const MultiIndex& alpha);

/// Coefficients of tau_x f_N(y) = f_N(y - x) re-expanded on the same box,
/// window widened by |x|_inf. |x|_inf must not exceed the current window.
GenFuncRep translate(const GenFuncRep& f, std::span<const double> x);
CoeffTensor translate_coeffs(const CoeffTensor& a, std::span<const double> x);

struct AssociationReport {
  std::vector<int> levels;
  std::vector<std::string> test_ids;
  std::vector<std::vector<double>> gaps;  // gaps[level index][test index]
  std::vector<bool> eventually_decreasing;
  std::vector<bool> strictly_decreasing;
  double tolerance = 0.0;
  bool verdict = false;

  double final_gap(std::size_t test) const { return gaps.back().at(test); }
};

inline constexpr double kDefaultAssociationTolerance = 1e-4;

// A family beta -> f_beta; lets callers supply representatives that are not
// partial sums of one tensor (e.g. translates of partial sums).
using RepFamily = std::function<GenFuncRep(int level)>;

/// |int (f_beta - g_beta) phi| for each level and test function, with the
/// members taken as box partial sums of f and g.
AssociationReport associated(const GenFuncRep& f, const GenFuncRep& g, const std::vector<TestFunction>& tests,
                             const std::vector<int>& levels, double tol = kDefaultAssociationTolerance);
AssociationReport associated(const RepFamily& f, const RepFamily& g, const std::vector<TestFunction>& tests,
                             const std::vector<int>& levels, double tol = kDefaultAssociationTolerance);

/// The pairing int u_N phi computed on the rule of u's spec.
double pair_with(const CoeffTensor& u, const Evaluable& phi);

struct TranslationBoundRow {
  std::vector<double> shift;
  double seminorm_shifted = 0.0;
  double seminorm_base = 0.0;
  double ratio = 0.0;  // |tau_x phi|_n / ((1+|x|)^{2n} |phi|_n)
};
std::vector<TranslationBoundRow> check_translation_bound(const Evaluable& phi, int n,
                                                         const std::vector<std::vector<double>>& shifts,
                                                         const BasisSpec& spec);

/// |phi psi|_n / (|phi|_r |psi|_s) for Schwartz phi, psi analysed on spec.
double multiplication_ratio(const Evaluable& phi, const Evaluable& psi, int n, int r, int s, const BasisSpec& spec);

/// h(t) f as a C1 element on time_grid, with d/dt representative h'(t) f.
GenFuncRep scale_in_time(const std::function<double(double)>& h, const std::function<double(double)>& dh,
                         const GenFuncRep& f, std::vector<double> time_grid);

/// Coefficient CSV(s) plus JSON sidecar {dim, level, time_class, time_grid}.
/// Static: <stem>.csv; time-dependent: <stem>_t<k>.csv (and <stem>_dt<k>.csv for C1).
void save_rep(const GenFuncRep& f, const std::filesystem::path& stem);
GenFuncRep load_rep(const std::filesystem::path& stem);

}  // namespace hgf
