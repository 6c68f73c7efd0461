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

// Acceptance run: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "hgf/coeff_space.hpp"
#include "hgf/commands.hpp"
#include "hgf/functions.hpp"
#include "hgf/gen_func.hpp"
#include "hgf/heat.hpp"
#include "hgf/ladder.hpp"
#include "hgf/stochastic.hpp"

using namespace hgf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double gauss(std::span<const double> x) { return std::exp(-0.5 * x[0] * x[0]); }
double x_gauss(std::span<const double> x) { return x[0] * std::exp(-0.5 * x[0] * x[0]); }
double cos_gauss(std::span<const double> x) { return std::cos(x[0]) * std::exp(-0.25 * x[0] * x[0]); }
double plateau(std::span<const double> x) {
  return 0.5 * (std::erf((x[0] + 16.0) / 2.0) - std::erf((x[0] - 16.0) / 2.0));
}

Outcome basis_fidelity() {
  const auto spec = BasisSpec::make(1, 32);
  const double defect = build_quadrature_unchecked(spec)->gram_defect;
  const CoeffTensor a = analyze(cos_gauss, spec);
  const CoeffTensor da = ladder_derivative(a, 0);
  const std::vector<double> hs{0.02, 0.01, 0.005, 0.0025};
  std::vector<double> err;
  for (double h : hs) {
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
      const double x = -4.0 + 0.2 * i;
      const std::vector<double> p{x}, pp{x + h}, pm{x - h};
      worst = std::max(worst, std::abs(synthesize(da, p) - (synthesize(a, pp) - synthesize(a, pm)) / (2.0 * h)));
    }
    err.push_back(worst);
  }
  bool ok = defect < 1e-9;
  std::string orders;
  for (std::size_t k = 1; k < err.size(); ++k) {
    const double p = std::log2(err[k - 1] / err[k]);
    ok = ok && std::abs(p - 2.0) <= 0.1;
    orders += (k > 1 ? "/" : "") + fmt("%.3f", p);
  }
  return {ok, "gram defect " + fmt("%.2e", defect) + ", FD orders " + orders};
}

Outcome seminorm_exactness() {
  double worst = 0.0;
  for (int d : {1, 2}) {
    const auto spec = BasisSpec::make(d, 20);
    CoeffTensor probe(spec);
    for (std::size_t flat = 0; flat < probe.size(); ++flat) {
      const MultiIndex beta = probe.index_of(flat);
      const CoeffTensor u = CoeffTensor::unit(spec, beta);
      for (int n = 0; n <= 4; ++n) {
        const double exact = std::pow(2.0 * beta.order() + d, n);
        worst = std::max(worst, std::abs(seminorm(u, n) - exact) / exact);
      }
    }
  }
  return {worst < 1e-12, "max relative error " + fmt("%.2e", worst) + " over beta <= 20, n <= 4, d = 1, 2"};
}

Outcome round_trip() {
  const auto spec40 = BasisSpec::make(1, 40);
  const auto spec64 = BasisSpec::make(1, 64);
  const std::vector<std::pair<const char*, double (*)(std::span<const double>)>> fns{
      {"gauss", gauss}, {"x_gauss", x_gauss}, {"cos_gauss", cos_gauss}};
  const CoeffTensor delta = embed_coeffs(DistributionSpec::dirac({0.0}), spec64);
  double grid_err = 0.0, pair_err = 0.0;
  for (const auto& [name, f] : fns) {
    const CoeffTensor a = analyze(f, spec40);
    for (int i = 0; i <= 400; ++i) {
      const std::vector<double> x{-10.0 + 0.05 * i};
      grid_err = std::max(grid_err, std::abs(synthesize(a, x) - f(x)));
    }
    const std::vector<double> zero{0.0};
    pair_err = std::max(pair_err, std::abs(pairing(delta, analyze(f, spec64)) - f(zero)));
  }
  return {grid_err < 1e-6 && pair_err < 1e-4,
          "synthesis error " + fmt("%.2e", grid_err) + " on [-10,10], delta pairing error " + fmt("%.2e", pair_err)};
}

Outcome translation_bound() {
  const auto spec = BasisSpec::make(1, 64);
  std::vector<std::vector<double>> shifts;
  for (int i = 0; i <= 20; ++i) shifts.push_back({-5.0 + 0.5 * i});
  double worst = 0.0, n0 = 0.0;
  for (int n : {0, 1, 2})
    for (const auto& r : check_translation_bound(gauss, n, shifts, spec)) {
      worst = std::max(worst, r.ratio);
      if (n == 0) n0 = std::max(n0, std::abs(r.ratio - 1.0));
    }
  return {worst < 10.0 && n0 < 1e-8, "max ratio " + fmt("%.4f", worst) + ", n = 0 deviation " + fmt("%.2e", n0)};
}

Outcome association() {
  const std::vector<TestFunction> tests{{"gauss", gauss}, {"x_gauss", x_gauss}, {"cos_gauss", cos_gauss}};
  const std::vector<int> levels{8, 16, 32, 64};
  const std::vector<double> one{1.0};
  const RepFamily moved = [&](int l) {
    const auto spec = BasisSpec::make(1, l);
    return translate(embed(DistributionSpec::dirac({0.0}), spec), one);
  };
  const RepFamily target = [](int l) { return embed(DistributionSpec::dirac({1.0}), BasisSpec::make(1, l)); };
  const auto rep = associated(moved, target, tests, levels, 1e-3);
  bool strict = true;
  double final_gap = 0.0;
  for (std::size_t t = 0; t < tests.size(); ++t) {
    strict = strict && rep.strictly_decreasing[t];
    final_gap = std::max(final_gap, rep.final_gap(t));
  }
  const RepFamily d0 = [](int l) { return embed(DistributionSpec::dirac({0.0}), BasisSpec::make(1, l)); };
  const RepFamily dh = [](int l) { return embed(DistributionSpec::dirac({0.5}), BasisSpec::make(1, l)); };
  const auto control = associated(d0, dh, tests, levels, 1e-3);
  return {rep.verdict && strict && final_gap < 1e-3 && !control.verdict,
          std::string("strictly decreasing ") + (strict ? "yes" : "no") + ", final gap " + fmt("%.2e", final_gap) +
              ", negative control verdict " + (control.verdict ? "true" : "false")};
}

std::vector<double> dyadic_steps() {
  std::vector<double> out;
  for (int k = 6; k <= 10; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

Outcome ito_formula() {
  const GenFuncRep f(analyze(gauss, BasisSpec::make(1, 24)));
  const std::vector<Functional> fns{Functional::test("gauss", gauss)};
  const auto rep = ito_sweep(f, 1.0, dyadic_steps(), 200, 20261019, fns);
  const double slope = rep.fitted_order[0];
  double constant = 0.0;
  for (double dt : dyadic_steps())
    for (double x0 : {-0.7, 0.0, 1.3}) {
      const Path p = constant_path(TimeGrid::make(1.0, dt), {x0});
      const auto r = ito_residual(f, p, 1.0, {Functional::test("gauss", gauss), Functional::at_point({0.2})});
      for (double v : r) constant = std::max(constant, std::abs(v));
    }
  return {std::abs(slope - 0.5) <= 0.2 && constant < 1e-12,
          "fitted slope " + fmt("%.3f", slope) + ", constant-path residual " + fmt("%.2e", constant)};
}

Outcome weak_ito() {
  const auto ws = ustunel_sweep(DistributionSpec::dirac({0.0}), gauss, 1.0, dyadic_steps(), {8, 16, 32, 64}, 100,
                                20261019);
  bool gaps = true;
  double last_gap = 0.0;
  for (const auto& row : ws.level_gaps) {
    for (std::size_t l = 1; l < row.size(); ++l) gaps = gaps && row[l] < row[l - 1];
    last_gap = std::max(last_gap, row.back());
  }
  return {gaps && std::abs(ws.fitted_order - 0.5) <= 0.2,
          std::string("level gaps decreasing ") + (gaps ? "yes" : "no") + " (largest final gap " +
              fmt("%.1e", last_gap) + "), fitted slope " + fmt("%.3f", ws.fitted_order)};
}

Outcome heat_equation() {
  const auto spec = BasisSpec::make(1, 48);
  const std::vector<double> times{0.1, 0.5, 1.0};
  const HeatProblem dirac{DistributionSpec::dirac({0.0}), std::nullopt, 1.0, 1};
  McOptions opt;
  opt.n_paths = 100000;
  opt.seed = 20261019;
  opt.tracked = {{"gauss", gauss}};
  const auto mc = solve_mc(dirac, spec, times, opt);
  bool mc_ok = true;
  double worst_z = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double exact = 1.0 / std::sqrt(1.0 + times[k]);
    const double gap = std::abs(mc.tracked_value[k][0] - exact);
    mc_ok = mc_ok && gap < 3.0 * mc.tracked_se[k][0] + 1e-3;
    worst_z = std::max(worst_z, gap / mc.tracked_se[k][0]);
  }

  // Gaussian initial data against the closed-form heat flow
  const HeatProblem g{DistributionSpec::sampled(gauss), std::nullopt, 1.0, 1};
  const std::vector<double> gtimes{0.0, 0.1, 0.25, 0.5, 1.0};
  const auto sp = solve_spectral(g, spec, gtimes);
  double closed = 0.0;
  for (std::size_t k = 0; k < gtimes.size(); ++k) {
    const double t = gtimes[k];
    const CoeffTensor exact = analyze(
        [t](std::span<const double> x) { return std::exp(-0.5 * x[0] * x[0] / (1.0 + t)) / std::sqrt(1.0 + t); },
        spec);
    const auto v = sp.reps[k].coeffs().values();
    for (std::size_t i = 0; i < exact.size(); ++i) closed = std::max(closed, std::abs(v[i] - exact.values()[i]));
  }
  double semigroup = 0.0;
  const CoeffTensor two_step = heat_convolve(sp.reps[2].coeffs(), 0.25);
  for (std::size_t i = 0; i < two_step.size(); ++i)
    semigroup = std::max(semigroup, std::abs(two_step.values()[i] - sp.reps[3].coeffs().values()[i]));

  HeatProblem dirac2 = dirac;
  dirac2.horizon = 2.0;
  double pde = 0.0;
  for (double t : times) {
    const auto tri = solve_spectral(dirac2, spec, {t - 1e-3, t, t + 1e-3});
    pde = std::max(pde, pde_residual(tri, gauss, t));
  }
  return {mc_ok && closed < 1e-7 && semigroup < 1e-6 && pde < 1e-4,
          "MC max |gap|/SE " + fmt("%.2f", worst_z) + ", closed-form error " + fmt("%.2e", closed) +
              ", semigroup gap " + fmt("%.2e", semigroup) + ", PDE residual " + fmt("%.2e", pde)};
}

Outcome inhomogeneous() {
  const auto spec = BasisSpec::make(1, 64);
  const GenFuncRep g(analyze(gauss, spec));
  const HeatProblem p{DistributionSpec::coefficients(CoeffTensor(spec)), g, 1.0, 1};
  const std::vector<double> times{0.25, 0.5, 0.75, 1.0};
  McOptions opt;
  opt.n_paths = 2000;
  opt.seed = 20261019;
  opt.source_step = 0.01;
  opt.tracked = {{"plateau", plateau}};
  const auto mc = solve_mc(p, spec, times, opt);
  const double rate = pair_with(g.coeffs(), plateau);
  bool ok = std::abs(rate - std::sqrt(2.0 * std::numbers::pi)) < 1e-9;
  double worst = 0.0, sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double expect = rate * times[k];
    const double gap = std::abs(mc.tracked_value[k][0] - expect);
    ok = ok && gap <= 3.0 * mc.tracked_se[k][0] + 1e-12 * std::abs(expect);
    worst = std::max(worst, gap);
    sxy += times[k] * mc.tracked_value[k][0];
    sxx += times[k] * times[k];
  }
  return {ok, "fitted rate " + fmt("%.12f", sxy / sxx) + " vs <g,phi> " + fmt("%.12f", rate) + ", max gap " +
                  fmt("%.2e", worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("hgf_acceptance_" + std::to_string(::getpid()));
  const std::vector<std::pair<std::string, std::string>> runs{
      {"ito-verify", R"({"n_paths": 200, "seed": 77})"},
      {"heat", R"({"times": [0.0, 0.1, 0.5, 1.0], "n_paths": 20000, "seed": 77})"},
  };
  bool ok = true;
  std::size_t compared = 0;
  for (const auto& [cmd, cfg] : runs) {
    std::vector<std::string> outputs;
    for (const char* tag : {"a", "b"}) {
      Overrides ov;
      ov.out = (root / tag).string();
      const auto r = run_command(cmd, cfg, ov);
      if (r.status != ExitStatus::pass) ok = false;
      std::string all;
      for (const auto& f : r.files)
        if (f.extension() == ".csv") all += f.filename().string() + "\n" + slurp(f);
      outputs.push_back(all);
    }
    ok = ok && !outputs[0].empty() && outputs[0] == outputs[1];
    compared += outputs[0].size();
  }
  fs::remove_all(root);
  return {ok, "ito-verify and heat CSVs identical across two runs (" + std::to_string(compared) + " bytes)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"basis fidelity", basis_fidelity},
      {"seminorm exactness", seminorm_exactness},
      {"representation round trip", round_trip},
      {"translation bound", translation_bound},
      {"association suite", association},
      {"Ito formula", ito_formula},
      {"weak Ito formula", weak_ito},
      {"heat equation", heat_equation},
      {"inhomogeneous heat", inhomogeneous},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %s  %s: %s (%.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
