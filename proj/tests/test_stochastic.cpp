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
#include <numeric>
#include <vector>

#include "doctest.h"
#include "hgf/error.hpp"
#include "hgf/stochastic.hpp"

using namespace hgf;

namespace {

double gauss2(std::span<const double> x) { return std::exp(-0.5 * x[0] * x[0]); }
double gauss4(std::span<const double> x) { return std::exp(-0.25 * x[0] * x[0]); }

GenFuncRep gaussian_rep(int level = 24) { return embed(DistributionSpec::sampled(gauss2), BasisSpec::make(1, level)); }

Path straight_line(double dt, double T = 1.0) {
  return deterministic_path(TimeGrid::make(T, dt), 1, [](double t, std::span<double> x) { x[0] = t; });
}

Path wavy(double dt) {
  return deterministic_path(TimeGrid::make(1.0, dt), 1, [](double t, std::span<double> x) { x[0] = std::sin(2.0 * t) - 0.3 * t; });
}

double max_grid_error(const CoeffTensor& a, const std::function<double(double)>& exact) {
  double err = 0.0;
  for (double y = -6.0; y <= 6.0; y += 0.1) err = std::max(err, std::abs(synthesize(a, std::vector<double>{y}) - exact(y)));
  return err;
}

}  // namespace

TEST_CASE("time grid") {
  const auto g = TimeGrid::make(1.0, 0.125);
  CHECK(g.steps == 8);
  CHECK(g.time(8) == 1.0);
  CHECK(g.index_of(0.375) == 3);
  CHECK_THROWS_AS(g.index_of(0.3), InvalidInput);
  CHECK_THROWS_AS(TimeGrid::make(1.0, 0.3), InvalidInput);
  CHECK_THROWS_AS(TimeGrid::make(-1.0, 0.1), InvalidInput);
  CHECK(TimeGrid::make(1.0, 0.1).steps == 10);
}

TEST_CASE("Brownian endpoint statistics") {
  const std::size_t n = 100000;
  const auto e = simulate_bm(1, TimeGrid::make(1.0, 0.5), n, 11);
  double m = 0.0, s2 = 0.0;
  for (const auto& p : e.paths) m += p.state(2)[0];
  m /= double(n);
  for (const auto& p : e.paths) s2 += (p.state(2)[0] - m) * (p.state(2)[0] - m);
  s2 /= double(n - 1);
  CHECK(std::abs(m) < 4.0 * std::sqrt(1.0 / double(n)));
  CHECK(std::abs(s2 - 1.0) < 0.05);
  CHECK_THROWS_AS(simulate_bm(1, TimeGrid::make(1.0, 0.5), 0, 1), InvalidInput);
}

TEST_CASE("realized quadratic variation of Brownian motion") {
  const auto e = simulate_bm(2, TimeGrid::make(1.0, 1e-3), 10, 3);
  double qv0 = 0.0, qv1 = 0.0, cross = 0.0;
  for (const auto& p : e.paths)
    for (std::size_t k = 0; k < p.steps(); ++k) {
      qv0 += p.realized_cov(k, 0, 0);
      qv1 += p.realized_cov(k, 1, 1);
      cross += p.realized_cov(k, 0, 1);
      CHECK(p.realized_cov(k, 0, 1) == p.realized_cov(k, 1, 0));
    }
  CHECK(qv0 / 10 == doctest::Approx(1.0).epsilon(0.05));
  CHECK(qv1 / 10 == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(cross / 10) < 0.05);
  CHECK(e.paths[0].model_cov(5, 0, 0) == 1e-3);
}

TEST_CASE("simulation is reproducible") {
  const auto g = TimeGrid::make(1.0, 1.0 / 64);
  const auto a = simulate_bm(1, g, 8, 42);
  const auto b = simulate_bm(1, g, 8, 42);
  const auto c = simulate_bm(1, g, 8, 43);
  bool same = true, differ = false;
  for (std::size_t p = 0; p < 8; ++p)
    for (std::size_t k = 0; k <= g.steps; ++k) {
      same = same && a.paths[p].state(k)[0] == b.paths[p].state(k)[0];
      differ = differ || a.paths[p].state(k)[0] != c.paths[p].state(k)[0];
    }
  CHECK(same);
  CHECK(differ);
}

TEST_CASE("Euler-Maruyama special cases") {
  const auto g = TimeGrid::make(1.0, 1.0 / 64);
  auto zero = [](double, std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
  auto one = [](double, std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 1.0); };
  const auto det = simulate_ito(1, g, one, zero, {0.5}, 2, 9);
  for (std::size_t k = 0; k <= g.steps; ++k) CHECK(det.paths[1].state(k)[0] == 0.5 + g.time(k));

  auto identity = [](double, std::span<const double>, std::span<double> out) {
    out[0] = 1.0; out[1] = 0.0; out[2] = 0.0; out[3] = 1.0;
  };
  const auto ito = simulate_ito(2, g, zero, identity, {0.0, 0.0}, 5, 21);
  const auto bm = simulate_bm(2, g, 5, 21);
  bool identical = true;
  for (std::size_t p = 0; p < 5; ++p)
    for (std::size_t k = 0; k < ito.paths[p].values().size(); ++k)
      identical = identical && ito.paths[p].values()[k] == bm.paths[p].values()[k];
  CHECK(identical);

  auto blow = [](double, std::span<const double> x, std::span<double> out) { out[0] = x[0] * x[0] * 1e3; };
  CHECK_THROWS_AS(simulate_ito(1, g, blow, zero, {1.0}, 1, 1), SimulationDiverged);
}

TEST_CASE("Ornstein-Uhlenbeck stationary variance") {
  const std::size_t n = 20000;
  auto drift = [](double, std::span<const double> x, std::span<double> out) { out[0] = -x[0]; };
  auto diff = [](double, std::span<const double>, std::span<double> out) { out[0] = 1.0; };
  const auto e = simulate_ito(1, TimeGrid::make(10.0, 0.02), drift, diff, {0.0}, n, 5);
  double s2 = 0.0;
  for (const auto& p : e.paths) s2 += p.state(p.steps())[0] * p.state(p.steps())[0];
  CHECK(s2 / double(n) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("Stieltjes integral") {
  const auto f = gaussian_rep(20);
  auto p = constant_path(TimeGrid::make(1.0, 0.125), {0.0});
  CHECK_THROWS_AS(stieltjes_integral(f, p, 1.0), InvalidInput);
  p.set_fv(std::vector<double>(9, 0.0));
  for (double v : stieltjes_integral(f, p, 1.0).coeffs().values()) CHECK(v == 0.0);
  std::vector<double> v(9);
  for (std::size_t k = 0; k < 9; ++k) v[k] = 0.125 * double(k);
  p.set_fv(v);
  const auto s = stieltjes_integral(f, p, 0.75);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i)
    CHECK(s.coeffs().values()[i] == doctest::Approx(0.75 * f.coeffs().values()[i]).epsilon(1e-10));
  CHECK(p.total_variation(8) == doctest::Approx(1.0));

  // straight line X_t = t against a dense trapezoid oracle
  auto oracle = [](double y) {
    double acc = 0.0;
    const int m = 4000;
    for (int i = 0; i <= m; ++i) {
      const double s = double(i) / m;
      acc += (i == 0 || i == m ? 0.5 : 1.0) * std::exp(-0.5 * (y - s) * (y - s));
    }
    return acc / m;
  };
  double prev = 0.0;
  for (double dt : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    Path line = straight_line(dt);
    std::vector<double> vv(line.steps() + 1);
    for (std::size_t k = 0; k < vv.size(); ++k) vv[k] = line.grid().time(k);
    line.set_fv(vv);
    const double err = max_grid_error(stieltjes_integral(f, line, 1.0).coeffs(), oracle);
    if (prev > 0.0) CHECK(err / prev == doctest::Approx(0.5).epsilon(0.1));
    prev = err;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("triangle bound") {
  const auto f = gaussian_rep(16);
  auto p = constant_path(TimeGrid::make(1.0, 0.25), {0.3});
  p.set_fv(std::vector<double>(5, 2.0));
  const auto z = check_triangle_bound(f, p, 1, 1.0);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);

  auto one = deterministic_path(TimeGrid::make(0.5, 0.5), 1, [](double t, std::span<double> x) { x[0] = 1.0 + t; });
  one.set_fv({0.0, -0.7});
  const auto eq = check_triangle_bound(f, one, 1, 0.5);
  CHECK(eq.lhs == doctest::Approx(eq.rhs).epsilon(1e-10));

  const auto e = simulate_bm(1, TimeGrid::make(1.0, 1.0 / 32), 10, 17);
  for (auto path : e.paths) {
    std::vector<double> vv(path.steps() + 1);
    for (std::size_t k = 0; k < vv.size(); ++k) vv[k] = path.grid().time(k);
    path.set_fv(vv);
    const auto b = check_triangle_bound(f, path, 1, 1.0);
    CHECK(b.lhs <= b.rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("Ito integral") {
  const auto f = gaussian_rep(24);
  const auto c = ito_integral(f, constant_path(TimeGrid::make(1.0, 0.125), {0.4}), 1.0);
  for (double v : c.coeffs().values()) CHECK(std::abs(v) < 1e-15);

  double prev = 0.0;
  for (double dt : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    const auto r = ito_integral(f, straight_line(dt), 1.0);
    const double err = max_grid_error(r.coeffs(), [](double y) {
      return std::exp(-0.5 * y * y) - std::exp(-0.5 * (y - 1) * (y - 1));
    });
    if (prev > 0.0) CHECK(err / prev == doctest::Approx(0.5).epsilon(0.1));
    prev = err;
  }
  CHECK(prev < 0.01);

  // smooth paths: reversal negates the integral up to O(dt)
  double rev_prev = 0.0;
  for (double dt : {1.0 / 32, 1.0 / 64}) {
    const Path p = wavy(dt);
    const CoeffTensor s = ito_integral(f, p, 1.0).coeffs() + ito_integral(f, time_reversed(p), 1.0).coeffs();
    const double m = std::sqrt(pairing(s, s));
    if (rev_prev > 0.0) CHECK(m / rev_prev == doctest::Approx(0.5).epsilon(0.1));
    rev_prev = m;
  }
}

TEST_CASE("Ito integral is linear") {
  const auto spec = BasisSpec::make(1, 20);
  const auto f = embed(DistributionSpec::sampled(gauss2), spec);
  const auto g = embed(DistributionSpec::dirac({0.2}), spec);
  CoeffTensor comb = 1.5 * f.coeffs();
  comb.axpy(-2.0, g.coeffs());
  const auto path = simulate_bm(1, TimeGrid::make(1.0, 1.0 / 64), 1, 8).paths[0];
  const auto lhs = ito_integral(GenFuncRep(comb), path, 1.0).coeffs();
  CoeffTensor rhs = 1.5 * ito_integral(f, path, 1.0).coeffs();
  rhs.axpy(-2.0, ito_integral(g, path, 1.0).coeffs());
  double m = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) m = std::max(m, std::abs(lhs.values()[i] - rhs.values()[i]));
  CHECK(m < 1e-10);
}

TEST_CASE("Ito residual on deterministic paths") {
  const auto f = gaussian_rep(24);
  const std::vector<Functional> fns{Functional::test("gauss", gauss4), Functional::at_point({0.5})};
  for (double v : ito_residual(f, constant_path(TimeGrid::make(1.0, 0.125), {0.7}), 1.0, fns)) CHECK(std::abs(v) < 1e-12);

  std::vector<double> prev;
  for (double dt : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    const auto r = ito_residual(f, wavy(dt), 1.0, fns);
    if (!prev.empty())
      for (std::size_t j = 0; j < r.size(); ++j) CHECK(std::abs(r[j] / prev[j]) == doctest::Approx(0.5).epsilon(0.1));
    prev = r;
  }
  CHECK(std::abs(prev[0]) < 1e-2);

  // time-dependent element e^t f
  const auto g = scale_in_time([](double t) { return std::exp(t); }, [](double t) { return std::exp(t); }, f,
                               {0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK_THROWS_AS(ito_residual(GenFuncRep(TimeClass::c0, {0.0, 1.0}, {f.coeffs(), f.coeffs()}), wavy(0.25), 1.0, fns),
                  InvalidInput);
  double p1 = 0.0;
  for (double dt : {1.0 / 32, 1.0 / 64}) {
    const double r = ito_residual(g, wavy(dt), 1.0, fns)[0];
    if (p1 != 0.0) CHECK(std::abs(r / p1) == doctest::Approx(0.5).epsilon(0.15));
    p1 = r;
  }
}

TEST_CASE("pointwise fast path agrees with re-expansion") {
  const auto f = gaussian_rep(40);
  const auto path = simulate_bm(1, TimeGrid::make(1.0, 1.0 / 64), 1, 13).paths[0];
  const std::vector<std::vector<double>> pts{{-1.0}, {0.0}, {0.5}, {2.0}};
  for (auto mode : {BracketMode::model, BracketMode::realized}) {
    ItoOptions o;
    o.bracket = mode;
    const auto fast = ito_residual_pointwise(f, path, 1.0, pts, o);
    std::vector<Functional> fns;
    for (const auto& p : pts) fns.push_back(Functional::at_point(p));
    const auto slow = ito_residual(f, path, 1.0, fns, o);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(fast[i] - slow[i]) < 1e-8);
  }
}

TEST_CASE("left-point vs midpoint on Brownian paths") {
  const auto f = gaussian_rep(20);
  const std::vector<Functional> fns{Functional::test("gauss", gauss4)};
  ItoOptions mid;
  mid.rule = EvalRule::midpoint;
  const std::vector<double> dts{1.0 / 32, 1.0 / 256};
  const auto left = ito_sweep(f, 1.0, dts, 40, 3, fns);
  const auto strat = ito_sweep(f, 1.0, dts, 40, 3, fns, mid);
  CHECK(left.rms[1][0] < 0.6 * left.rms[0][0]);
  CHECK(strat.rms[1][0] > 0.8 * strat.rms[0][0]);
  CHECK(strat.rms[1][0] > 3.0 * left.rms[1][0]);
}

TEST_CASE("weak residual for the Dirac mass") {
  const auto d0 = DistributionSpec::dirac({0.0});
  CHECK(std::abs(ustunel_weak_residual(d0, constant_path(TimeGrid::make(1.0, 0.25), {0.3}), gauss2, 1.0, 16)) < 1e-12);
  double prev = 0.0;
  for (double dt : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    const double r = ustunel_weak_residual(d0, wavy(dt), gauss2, 1.0, 32);
    if (prev != 0.0) CHECK(std::abs(r / prev) == doctest::Approx(0.5).epsilon(0.1));
    prev = r;
  }
}

TEST_CASE("sweeps are deterministic and fit slopes") {
  const std::vector<double> xs{1, 2, 4, 8}, ys{3, 3 * std::sqrt(2.0), 6, 6 * std::sqrt(2.0)};
  CHECK(fit_log_slope(xs, ys) == doctest::Approx(0.5));
  const auto f = gaussian_rep(16);
  const std::vector<Functional> fns{Functional::test("gauss", gauss4)};
  const auto a = ito_sweep(f, 1.0, {1.0 / 16, 1.0 / 32}, 12, 99, fns);
  const auto b = ito_sweep(f, 1.0, {1.0 / 16, 1.0 / 32}, 12, 99, fns);
  CHECK(a.rms == b.rms);
  CHECK(a.rms[0][0] > 0.0);
}
