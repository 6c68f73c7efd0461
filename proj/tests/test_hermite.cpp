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
#include <numbers>
#include <vector>

#include "doctest.h"
#include "hgf/coeff_space.hpp"
#include "hgf/error.hpp"
#include "hgf/hermite.hpp"
#include "hgf/ladder.hpp"
#include "hgf/quadrature.hpp"

using namespace hgf;

namespace {

// Closed-form oracle for h_n(x) = (sqrt(2 pi) n!)^{-1/2} e^{-x^2/4} H_n(x),
// usable while n! and H_n stay in range.
double h_closed_form(int n, double x) {
  const double norm = 1.0 / std::sqrt(std::sqrt(2.0 * std::numbers::pi) * std::tgamma(n + 1.0));
  return norm * std::exp(-0.25 * x * x) * hermite_poly(n, x);
}

// log |h_{2m}(0)| from H_{2m}(0) = (-1)^m (2m-1)!!, all in log space.
double log_abs_h_even_at_zero(int m) {
  const double log_double_factorial = std::lgamma(2.0 * m + 1.0) - m * std::log(2.0) - std::lgamma(m + 1.0);
  return -0.5 * (0.5 * std::log(2.0 * std::numbers::pi) + std::lgamma(2.0 * m + 1.0)) + log_double_factorial;
}

double central_difference(int n, double x, double step) {
  return (hermite_func(n, x + step) - hermite_func(n, x - step)) / (2.0 * step);
}

}  // namespace

TEST_CASE("hermite_poly follows the probabilists' recurrence") {
  CHECK(hermite_poly(0, 3.7) == 1.0);
  CHECK(hermite_poly(1, 2.0) == 2.0);
  CHECK(hermite_poly(2, 0.0) == -1.0);
  // H_3 = x^3 - 3x, H_4 = x^4 - 6x^2 + 3
  CHECK(hermite_poly(3, 1.5) == doctest::Approx(1.5 * 1.5 * 1.5 - 4.5).epsilon(1e-15));
  CHECK(hermite_poly(4, 2.0) == doctest::Approx(16.0 - 24.0 + 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(hermite_poly(2, NAN), InvalidInput);
  CHECK_THROWS_AS(hermite_poly(-1, 0.0), InvalidInput);
}

TEST_CASE("hermite_func values at the origin") {
  CHECK(hermite_func(0, 0.0) == doctest::Approx(std::pow(2.0 * std::numbers::pi, -0.25)).epsilon(1e-15));
  CHECK(hermite_func(0, 0.0) == doctest::Approx(0.631618778).epsilon(1e-9));
  CHECK(std::abs(hermite_func(1, 0.0)) < 1e-300);
  const double expected6 = std::pow(std::sqrt(2.0 * std::numbers::pi) * 720.0, -0.5) * -15.0;
  CHECK(hermite_func(6, 0.0) == doctest::Approx(expected6).epsilon(1e-14));
  CHECK_THROWS_AS(hermite_func(3, INFINITY), InvalidInput);
}

TEST_CASE("hermite_func agrees with the closed form for n <= 30, |x| <= 8") {
  double worst = 0.0;
  for (int n = 0; n <= 30; ++n) {
    for (double x = -8.0; x <= 8.0; x += 0.37) {
      const double ref = h_closed_form(n, x);
      const double got = hermite_func(n, x);
      const double scale = std::max(std::abs(ref), 1e-300);
      // Near a zero of H_n relative error is meaningless; compare against the envelope.
      const double envelope = std::abs(hermite_func(0, x)) + scale;
      worst = std::max(worst, std::abs(got - ref) / std::max(scale, 1e-6 * envelope));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("hermite_func symmetry h_n(-x) = (-1)^n h_n(x)") {
  for (int n = 0; n <= 60; n += 3) {
    for (double x : {0.1, 1.3, 4.2, 9.7}) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      CHECK(std::abs(hermite_func(n, -x) - sign * hermite_func(n, x)) <= 1e-12);
    }
  }
}

TEST_CASE("hermite_func stays finite for large orders") {
  for (int m : {500, 2500, 5000}) {
    const double got = hermite_func(2 * m, 0.0);
    CHECK(std::isfinite(got));
    CHECK(std::log(std::abs(got)) == doctest::Approx(log_abs_h_even_at_zero(m)).epsilon(1e-10));
  }
  for (double x : {-50.0, -20.0, 35.0, 50.0}) {
    const double v = hermite_func(10000, x);
    CHECK(std::isfinite(v));
    CHECK(std::abs(v) < 1.0);
  }
  // Batch recurrence and the rescaled single evaluation agree.
  std::vector<double> h(401);
  hermite_funcs(400, 7.3, h);
  CHECK(h[400] == doctest::Approx(hermite_func(400, 7.3)).epsilon(1e-10));
}

TEST_CASE("hermite_tensor factorizes") {
  const std::vector<double> origin{0.0, 0.0};
  CHECK(hermite_tensor(MultiIndex{0, 0}, origin) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
  CHECK(hermite_tensor(MultiIndex{0, 0}, origin) == doctest::Approx(0.398942).epsilon(1e-6));
  for (double y : {-2.0, 0.3, 5.0}) {
    const std::vector<double> x{0.0, y};
    CHECK(std::abs(hermite_tensor(MultiIndex{1, 0}, x)) < 1e-300);
  }
  const std::vector<double> ab{0.7, -1.9};
  CHECK(hermite_tensor(MultiIndex{2, 3}, ab) == hermite_func(2, 0.7) * hermite_func(3, -1.9));
  CHECK_THROWS_AS(hermite_tensor(MultiIndex{1, 2, 3}, ab), InvalidInput);
  CHECK_THROWS_AS(MultiIndex({1, -1}), InvalidInput);
  CHECK(MultiIndex({2, 3, 1}).order() == 6);
}

TEST_CASE("build_quadrature: worked configurations") {
  BasisSpec s;
  s.dim = 1;
  s.level = 8;
  s.nodes = 64;
  s.halfwidth = 12.0;
  CHECK(build_quadrature(s)->gram_defect < 1e-10);

  s.level = 0;
  s.nodes = 2;
  const auto small = build_quadrature(s);
  double norm = 0.0;
  for (std::size_t k = 0; k < small->nodes.size(); ++k) {
    norm += small->weights[k] * std::pow(hermite_func(0, small->nodes[k]), 2);
  }
  CHECK(std::abs(norm - 1.0) < 1e-10);

  s.level = 32;
  s.nodes = 16;
  try {
    build_quadrature(s);
    FAIL("expected quadrature-insufficient");
  } catch (const QuadratureInsufficient& e) {
    CHECK(e.defect() > 1e-9);
  }
}

TEST_CASE("default rule is orthonormal up to level 40") {
  for (int n = 0; n <= 40; n += 4) {
    const BasisSpec spec = BasisSpec::make(1, n);
    CHECK(spec.nodes >= 2 * n + 2);
    const auto rule = build_quadrature(spec);
    CHECK(rule->gram_defect < 1e-9);
  }
  // Explicit Gram-matrix oracle at N = 40, independent of gram_defect().
  const BasisSpec spec = BasisSpec::make(1, 40);
  const auto rule = build_quadrature(spec);
  double worst = 0.0;
  for (int a = 0; a <= 40; a += 3) {
    for (int b = 0; b <= 40; b += 5) {
      double g = 0.0;
      for (std::size_t k = 0; k < rule->nodes.size(); ++k) {
        g += rule->weights[k] * hermite_func(a, rule->nodes[k]) * hermite_func(b, rule->nodes[k]);
      }
      worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
    }
  }
  CHECK(worst < 1e-9);
  CHECK(build_quadrature(BasisSpec::make(2, 12))->gram_defect < 1e-9);
}

TEST_CASE("quadrature weights integrate constants and Gaussians") {
  const auto rule = gauss_hermite_rule(80);
  double gauss = 0.0;
  for (std::size_t k = 0; k < rule->nodes.size(); ++k) gauss += rule->weights[k] * std::exp(-0.5 * rule->nodes[k] * rule->nodes[k]);
  CHECK(gauss == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-13));
  const auto normal = normal_rule(40);
  double mean = 0.0, var = 0.0, total = 0.0;
  for (std::size_t k = 0; k < normal->nodes.size(); ++k) {
    total += normal->weights[k];
    mean += normal->weights[k] * normal->nodes[k];
    var += normal->weights[k] * normal->nodes[k] * normal->nodes[k];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(mean) < 1e-14);
  CHECK(var == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("ladder_derivative matches finite differences") {
  const BasisSpec spec = BasisSpec::make(1, 6);
  // Oracle: analyze the central-difference derivative of h_n by quadrature.
  auto fd_coeffs = [&](int n) {
    return analyze([n](std::span<const double> x) { return central_difference(n, x[0], 1e-5); }, spec.with_level(8));
  };

  const CoeffTensor d0 = ladder_derivative(CoeffTensor::unit(spec, MultiIndex{0}), 0);
  CHECK(d0.levels()[0] == 7);
  const CoeffTensor fd0 = fd_coeffs(0);
  CHECK(d0.at(MultiIndex{1}) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(std::abs(fd0.at(MultiIndex{1}) - d0.at(MultiIndex{1})) < 1e-8);

  const CoeffTensor d2 = ladder_derivative(CoeffTensor::unit(spec, MultiIndex{2}), 0);
  const CoeffTensor fd2 = fd_coeffs(2);
  CHECK(d2.at(MultiIndex{1}) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
  CHECK(d2.at(MultiIndex{3}) == doctest::Approx(-std::sqrt(3.0) / 2.0).epsilon(1e-14));
  for (int m = 0; m <= 7; ++m) {
    CHECK(std::abs(fd2.at(MultiIndex{m}) - d2.at(MultiIndex{m})) < 1e-8);
  }

  const CoeffTensor zero(spec);
  const CoeffTensor dz = ladder_derivative(zero, 0);
  for (double v : dz.values()) CHECK(v == 0.0);
  CHECK_THROWS_AS(ladder_derivative(zero, 1), InvalidInput);
}

TEST_CASE("ladder derivative error against central differences is second order") {
  // max over grid of |predicted h_n'(x) - central difference| for two steps
  auto max_err = [](double step) {
    double worst = 0.0;
    std::vector<double> deriv(21);
    for (double x = -6.0; x <= 6.0; x += 0.25) {
      hermite_func_derivs(20, x, deriv);
      for (int n = 0; n <= 20; ++n) worst = std::max(worst, std::abs(deriv[n] - central_difference(n, x, step)));
    }
    return worst;
  };
  const double e1 = max_err(1e-2);
  const double e2 = max_err(5e-3);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("ladder_multiply_x matches quadrature") {
  const BasisSpec spec = BasisSpec::make(1, 6);
  const auto rule = build_quadrature(spec.with_level(8));
  auto x_moment = [&](int a, int b) {
    double s = 0.0;
    for (std::size_t k = 0; k < rule->nodes.size(); ++k) {
      const double x = rule->nodes[k];
      s += rule->weights[k] * x * hermite_func(a, x) * hermite_func(b, x);
    }
    return s;
  };
  const CoeffTensor m0 = ladder_multiply_x(CoeffTensor::unit(spec, MultiIndex{0}), 0);
  CHECK(m0.at(MultiIndex{1}) == doctest::Approx(x_moment(0, 1)).epsilon(1e-12));
  CHECK(m0.at(MultiIndex{1}) == doctest::Approx(1.0).epsilon(1e-14));
  const CoeffTensor m1 = ladder_multiply_x(CoeffTensor::unit(spec, MultiIndex{1}), 0);
  CHECK(m1.at(MultiIndex{0}) == doctest::Approx(x_moment(1, 0)).epsilon(1e-12));
  CHECK(m1.at(MultiIndex{2}) == doctest::Approx(x_moment(1, 2)).epsilon(1e-12));
  CHECK(m1.at(MultiIndex{2}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  const CoeffTensor mz = ladder_multiply_x(CoeffTensor(spec), 0);
  for (double v : mz.values()) CHECK(v == 0.0);
}

TEST_CASE("ladder operators act along one axis in 2-d") {
  const BasisSpec spec = BasisSpec::make(2, 3);
  const CoeffTensor a = CoeffTensor::unit(spec, MultiIndex{1, 2});
  const CoeffTensor d = ladder_derivative(a, 1);
  CHECK(d.levels()[0] == 3);
  CHECK(d.levels()[1] == 4);
  CHECK(d.at(MultiIndex{1, 1}) == doctest::Approx(std::sqrt(2.0) / 2.0));
  CHECK(d.at(MultiIndex{1, 3}) == doctest::Approx(-std::sqrt(3.0) / 2.0));
  CHECK(d.at(MultiIndex{0, 1}) == 0.0);
}
