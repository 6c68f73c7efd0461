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

// Hermite polynomials and orthonormal Hermite functions in the probabilists'
// convention:
//
//   H_n(x) = (-1)^n e^{x^2/2} d^n/dx^n e^{-x^2/2}
//   h_n(x) = (sqrt(2 pi) n!)^{-1/2} e^{-x^2/4} H_n(x)
//
// The h_n are orthonormal in L^2(R). Everything downstream (ladder constants,
// quadrature weights, seminorm weights 2|beta|+d) assumes this normalization.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace hgf {

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries);
  static MultiIndex zeros(int dim) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)); }

  int dim() const noexcept { return static_cast<int>(entries_.size()); }
  int order() const noexcept { return order_; }
  int operator[](int axis) const { return entries_.at(static_cast<std::size_t>(axis)); }
  std::span<const int> entries() const noexcept { return entries_; }

  // Componentwise partial order used for box partial sums.
  bool leq(const MultiIndex& other) const;
  std::string str() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<int> entries_;
  int order_ = 0;
};

/// H_n(x) by the three-term recurrence H_{n+1} = x H_n - n H_{n-1}.
/// Overflows to +-inf for large n; use hermite_func for anything normalized.
double hermite_poly(int n, double x);

/// h_n(x), evaluated through the normalized recurrence
/// h_{n+1} = (x h_n - sqrt(n) h_{n-1}) / sqrt(n+1) with running rescaling,
/// so neither n! nor H_n is ever formed.
double hermite_func(int n, double x);

/// h_0(x), ..., h_nmax(x) written to out[0..nmax]. Plain recurrence without
/// rescaling; accurate while h_0(x) does not underflow (|x| < ~53).
void hermite_funcs(int nmax, double x, std::span<double> out);

/// h_0'(x), ..., h_nmax'(x) via h_n' = (sqrt(n) h_{n-1} - sqrt(n+1) h_{n+1}) / 2.
void hermite_func_derivs(int nmax, double x, std::span<double> out);

/// sum_{n<count} h_n(x)^2, robust for large count and |x|.
double hermite_sum_squares(int count, double x);

/// h_beta(x) = prod_i h_{beta_i}(x_i).
double hermite_tensor(const MultiIndex& beta, std::span<const double> x);

// Precomputed recurrence constants, shared by the hot evaluation loops.
class HermiteTable {
 public:
  explicit HermiteTable(int nmax);
  int nmax() const noexcept { return nmax_; }
  // h_{n+1} = x * up[n] * h_n - down[n] * h_{n-1}
  double up(int n) const { return up_[static_cast<std::size_t>(n)]; }
  double down(int n) const { return down_[static_cast<std::size_t>(n)]; }
  void eval(double x, std::span<double> out) const;
  // sum_n c_n h_n(x) for n <= c.size()-1 without materializing the h_n.
  double dot(double x, std::span<const double> c) const;

 private:
  int nmax_;
  std::vector<double> up_;
  std::vector<double> down_;
};

}  // namespace hgf
