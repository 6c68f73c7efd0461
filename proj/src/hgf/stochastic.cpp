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

#include "hgf/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hgf/error.hpp"
#include "hgf/ladder.hpp"
#include "hgf/parallel.hpp"
#include "hgf/rng.hpp"
#include "hgf/summation.hpp"

namespace hgf {

// ------------------------------------------------------------------ TimeGrid

TimeGrid TimeGrid::make(double horizon, double step) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidInput("TimeGrid: horizon must be positive");
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidInput("TimeGrid: step must be positive");
  const double ratio = horizon / step;
  const double k = std::round(ratio);
  if (k < 1.0 || std::abs(ratio - k) > 1e-9 * std::max(1.0, ratio))
    throw InvalidInput("TimeGrid: horizon must be an integer multiple of the step");
  if (k > 1e8) throw InvalidInput("TimeGrid: too many steps");
  return TimeGrid{horizon, step, static_cast<std::size_t>(k)};
}

std::size_t TimeGrid::index_of(double t) const {
  if (!std::isfinite(t) || t < -1e-12 || t > horizon * (1 + 1e-12)) throw InvalidInput("time outside [0, T]");
  const double k = std::round(t / step);
  if (std::abs(t - k * step) > 1e-9 * step) throw InvalidInput("time is not a grid point");
  return std::min(static_cast<std::size_t>(k), steps);
}

// ---------------------------------------------------------------------- Path

Path::Path(TimeGrid grid, int dim, std::vector<double> values) : grid_(grid), dim_(dim), values_(std::move(values)) {
  if (dim < 1) throw InvalidInput("Path: dimension must be >= 1");
  if (values_.size() != (grid_.steps + 1) * static_cast<std::size_t>(dim))
    throw InvalidInput("Path: value count does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidInput("Path: non-finite state");
}

std::span<const double> Path::state(std::size_t k) const {
  if (k > grid_.steps) throw InvalidInput("Path: step index out of range");
  return std::span<const double>(values_).subspan(k * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_));
}

double Path::increment(std::size_t k, int i) const {
  const std::size_t d = static_cast<std::size_t>(dim_);
  return values_[(k + 1) * d + static_cast<std::size_t>(i)] - values_[k * d + static_cast<std::size_t>(i)];
}

double Path::model_cov(std::size_t k, int i, int j) const {
  switch (cov_kind_) {
    case CovKind::none: throw InvalidInput("Path: no model covariance attached");
    case CovKind::zero: return 0.0;
    case CovKind::unit_rate: return i == j ? grid_.step : 0.0;
    case CovKind::stored: {
      const std::size_t d = static_cast<std::size_t>(dim_);
      return cov_[(k * d + static_cast<std::size_t>(i)) * d + static_cast<std::size_t>(j)];
    }
  }
  return 0.0;
}

void Path::set_model_cov(std::vector<double> per_step) {
  const std::size_t d = static_cast<std::size_t>(dim_);
  if (per_step.size() != grid_.steps * d * d) throw InvalidInput("Path: covariance size mismatch");
  cov_ = std::move(per_step);
  cov_kind_ = CovKind::stored;
}

void Path::set_fv(std::vector<double> v) {
  if (v.size() != grid_.steps + 1) throw InvalidInput("Path: finite-variation samples must match the grid");
  tv_.assign(v.size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k])) throw InvalidInput("Path: non-finite finite-variation sample");
    if (k > 0) tv_[k] = tv_[k - 1] + std::abs(v[k] - v[k - 1]);
  }
  fv_ = std::move(v);
}

double Path::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------- simulation

PathEnsemble simulate_bm(int dim, const TimeGrid& grid, std::size_t count, std::uint64_t seed) {
  if (dim < 1) throw InvalidInput("simulate_bm: dimension must be >= 1");
  if (count == 0) throw InvalidInput("simulate_bm: count must be >= 1");
  const std::size_t d = static_cast<std::size_t>(dim);
  const double sd = std::sqrt(grid.step);
  std::vector<std::optional<Path>> out(count);
  parallel_for(count, [&](std::size_t p) {
    NormalStream rng(seed, p, StreamPurpose::brownian);
    std::vector<double> v((grid.steps + 1) * d, 0.0);
    for (std::size_t k = 0; k < grid.steps; ++k)
      for (std::size_t i = 0; i < d; ++i) v[(k + 1) * d + i] = v[k * d + i] + sd * rng.normal();
    Path path(grid, dim, std::move(v));
    path.set_unit_rate_cov();
    out[p] = std::move(path);
  });
  PathEnsemble e{{}, seed, "bm/euler; normals: mt19937_64 + box-muller; streams: splitmix64(seed, path)", dim, grid};
  e.paths.reserve(count);
  for (auto& p : out) e.paths.push_back(std::move(*p));
  return e;
}

PathEnsemble simulate_ito(int dim, const TimeGrid& grid, const DriftFn& drift, const DiffusionFn& diffusion,
                          std::vector<double> x0, std::size_t count, std::uint64_t seed) {
  if (dim < 1) throw InvalidInput("simulate_ito: dimension must be >= 1");
  if (count == 0) throw InvalidInput("simulate_ito: count must be >= 1");
  if (!drift || !diffusion) throw InvalidInput("simulate_ito: drift and diffusion must be given");
  const std::size_t d = static_cast<std::size_t>(dim);
  if (x0.size() != d) throw InvalidInput("simulate_ito: initial point dimension mismatch");
  for (double v : x0)
    if (!std::isfinite(v)) throw InvalidInput("simulate_ito: non-finite initial point");
  const double sd = std::sqrt(grid.step);
  std::vector<std::optional<Path>> out(count);
  parallel_for(count, [&](std::size_t p) {
    NormalStream rng(seed, p, StreamPurpose::brownian);
    std::vector<double> v((grid.steps + 1) * d, 0.0);
    std::vector<double> cov(grid.steps * d * d, 0.0);
    std::copy(x0.begin(), x0.end(), v.begin());
    std::vector<double> b(d), s(d * d), dw(d);
    for (std::size_t k = 0; k < grid.steps; ++k) {
      const std::span<const double> x(v.data() + k * d, d);
      const double t = grid.time(k);
      drift(t, x, b);
      diffusion(t, x, s);
      for (std::size_t i = 0; i < d; ++i) dw[i] = sd * rng.normal();
      for (std::size_t i = 0; i < d; ++i) {
        double incr = b[i] * grid.step;
        for (std::size_t j = 0; j < d; ++j) incr += s[i * d + j] * dw[j];
        v[(k + 1) * d + i] = v[k * d + i] + incr;
        if (!std::isfinite(v[(k + 1) * d + i]))
          throw SimulationDiverged("simulate_ito: state became non-finite", p, k + 1);
        for (std::size_t j = 0; j < d; ++j) {
          double c = 0.0;
          for (std::size_t m = 0; m < d; ++m) c += s[i * d + m] * s[j * d + m];
          cov[(k * d + i) * d + j] = c * grid.step;
        }
      }
    }
    Path path(grid, dim, std::move(v));
    path.set_model_cov(std::move(cov));
    out[p] = std::move(path);
  });
  PathEnsemble e{{}, seed, "euler-maruyama; normals: mt19937_64 + box-muller; streams: splitmix64(seed, path)", dim,
                 grid};
  e.paths.reserve(count);
  for (auto& p : out) e.paths.push_back(std::move(*p));
  return e;
}

Path constant_path(const TimeGrid& grid, std::vector<double> x0) {
  const int dim = static_cast<int>(x0.size());
  std::vector<double> v;
  for (std::size_t k = 0; k <= grid.steps; ++k) v.insert(v.end(), x0.begin(), x0.end());
  Path p(grid, dim, std::move(v));
  p.set_zero_cov();
  return p;
}

Path deterministic_path(const TimeGrid& grid, int dim, const std::function<void(double, std::span<double>)>& x) {
  const std::size_t d = static_cast<std::size_t>(dim);
  std::vector<double> v((grid.steps + 1) * d);
  for (std::size_t k = 0; k <= grid.steps; ++k) x(grid.time(k), std::span<double>(v.data() + k * d, d));
  Path p(grid, dim, std::move(v));
  p.set_zero_cov();
  return p;
}

Path time_reversed(const Path& p) {
  const std::size_t d = static_cast<std::size_t>(p.dim());
  std::vector<double> v(p.values().size());
  for (std::size_t k = 0; k <= p.steps(); ++k) {
    const auto s = p.state(p.steps() - k);
    std::copy(s.begin(), s.end(), v.begin() + static_cast<std::ptrdiff_t>(k * d));
  }
  Path r(p.grid(), p.dim(), std::move(v));
  if (p.has_model_cov()) {
    std::vector<double> cov(p.steps() * d * d);
    for (std::size_t k = 0; k < p.steps(); ++k)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          cov[(k * d + i) * d + j] = p.model_cov(p.steps() - 1 - k, static_cast<int>(i), static_cast<int>(j));
    r.set_model_cov(std::move(cov));
  }
  return r;
}

// ----------------------------------------------------------------- integrals

namespace {

constexpr int kPad = 2;

std::vector<int> padded(std::span<const int> levels, int pad) {
  std::vector<int> out(levels.begin(), levels.end());
  for (int& l : out) l += pad;
  return out;
}

// Grid for re-expanding translates along the path up to step K. The widening
// margin is rounded up to a half unit so paths share cached rules.
NodeGrid path_grid(const GenFuncRep& f, const Path& path, std::size_t K, int pad) {
  if (path.dim() != f.dim()) throw InvalidInput("path and representative dimensions differ");
  double r = 0.0;
  for (std::size_t k = 0; k <= K; ++k)
    for (double v : path.state(k)) r = std::max(r, std::abs(v));
  if (r > f.spec().halfwidth) throw InvalidInput("path leaves the quadrature window of the representative");
  const std::vector<int> lv = padded(f.levels(), pad);
  BasisSpec s = f.spec().with_level(*std::max_element(lv.begin(), lv.end()));
  return NodeGrid(s.widened(std::ceil(2.0 * r) / 2.0));
}

void add_scaled(std::vector<double>& acc, double c, const std::vector<double>& v) {
  for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += c * v[q];
}

struct Accumulated {
  std::vector<double> ends;                 // f(t) at X_t minus f(0) at X_0
  std::vector<double> dt_term;              // sum dt * (d_t f)(t_k) at X_k
  std::vector<std::vector<double>> dx;      // per axis: sum dX^i f(t_k) at X_eval
  std::vector<std::vector<double>> bracket; // per (i <= j): sum d<X^i,X^j> f(t_k) at X_k
};

double bracket_increment(const Path& path, std::size_t k, int i, int j, BracketMode mode) {
  return mode == BracketMode::model ? path.model_cov(k, i, j) : path.realized_cov(k, i, j);
}

Accumulated accumulate(const GenFuncRep& f, const Path& path, std::size_t K, const NodeGrid& grid,
                       const ItoOptions& opt, bool full) {
  const int d = f.dim();
  const std::size_t n = grid.size();
  Accumulated acc;
  acc.dx.assign(static_cast<std::size_t>(d), std::vector<double>(n, 0.0));
  if (full) {
    acc.bracket.assign(static_cast<std::size_t>(d * (d + 1) / 2), std::vector<double>(n, 0.0));
    acc.ends.assign(n, 0.0);
    if (f.time_class() == TimeClass::c1) acc.dt_term.assign(n, 0.0);
  }
  const auto& grid_ = path.grid();
  std::vector<double> mid(static_cast<std::size_t>(d));
  for (std::size_t k = 0; k < K; ++k) {
    const double t = grid_.time(k);
    const CoeffTensor a = f.at_time(t);
    const auto xk = path.state(k);
    const std::vector<double> left = grid.synthesize_shifted(a, xk);
    if (opt.rule == EvalRule::midpoint) {
      const auto x1 = path.state(k + 1);
      for (int i = 0; i < d; ++i) mid[static_cast<std::size_t>(i)] = 0.5 * (xk[static_cast<std::size_t>(i)] + x1[static_cast<std::size_t>(i)]);
      const std::vector<double> m = grid.synthesize_shifted(a, mid);
      for (int i = 0; i < d; ++i) add_scaled(acc.dx[static_cast<std::size_t>(i)], path.increment(k, i), m);
    } else {
      for (int i = 0; i < d; ++i) add_scaled(acc.dx[static_cast<std::size_t>(i)], path.increment(k, i), left);
    }
    if (!full) continue;
    std::size_t slot = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) add_scaled(acc.bracket[slot++], bracket_increment(path, k, i, j, opt.bracket), left);
    if (f.time_class() == TimeClass::c1)
      add_scaled(acc.dt_term, grid_.step, grid.synthesize_shifted(f.time_derivative(t), xk));
  }
  if (full) {
    const std::vector<double> end = grid.synthesize_shifted(f.at_time(grid_.time(K)), path.state(K));
    const std::vector<double> start = grid.synthesize_shifted(f.at_time(0.0), path.state(0));
    for (std::size_t q = 0; q < n; ++q) acc.ends[q] = end[q] - start[q];
  }
  return acc;
}

CoeffTensor grow_to(const CoeffTensor& a, const std::vector<int>& levels) { return a.resized(levels); }

}  // namespace

const char* to_string(BracketMode m) { return m == BracketMode::model ? "model" : "realized"; }
const char* to_string(EvalRule r) { return r == EvalRule::left ? "left" : "midpoint"; }

GenFuncRep stieltjes_integral(const GenFuncRep& f, const Path& path, double t) {
  if (!path.has_fv()) throw InvalidInput("stieltjes_integral: path carries no finite-variation part");
  const std::size_t K = path.grid().index_of(t);
  const NodeGrid grid = path_grid(f, path, K, 0);
  std::vector<double> acc(grid.size(), 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const double dv = path.fv(k + 1) - path.fv(k);
    if (dv == 0.0) continue;
    add_scaled(acc, dv, grid.synthesize_shifted(f.at_time(path.grid().time(k)), path.state(k)));
  }
  return GenFuncRep(grid.analyze(acc, std::vector<int>(f.levels().begin(), f.levels().end())));
}

TriangleBound check_triangle_bound(const GenFuncRep& f, const Path& path, int n, double t) {
  if (!path.has_fv()) throw InvalidInput("check_triangle_bound: path carries no finite-variation part");
  const std::size_t K = path.grid().index_of(t);
  TriangleBound out;
  out.lhs = seminorm(stieltjes_integral(f, path, t).coeffs(), n);
  CompensatedSum rhs;
  for (std::size_t k = 0; k < K; ++k) {
    const double dv = path.fv(k + 1) - path.fv(k);
    if (dv == 0.0) continue;
    rhs.add(seminorm(translate_coeffs(f.at_time(path.grid().time(k)), path.state(k)), n) * std::abs(dv));
  }
  out.rhs = rhs.value();
  return out;
}

GenFuncRep ito_integral(const GenFuncRep& f, const Path& path, double t, EvalRule rule) {
  const std::size_t K = path.grid().index_of(t);
  const NodeGrid grid = path_grid(f, path, K, kPad);
  ItoOptions opt;
  opt.rule = rule;
  const Accumulated acc = accumulate(f, path, K, grid, opt, false);
  const std::vector<int> base = padded(f.levels(), kPad);
  const std::vector<int> out = padded(f.levels(), 1);
  CoeffTensor sum = grid.analyze(std::vector<double>(grid.size(), 0.0), base).resized(out);
  for (int i = 0; i < f.dim(); ++i)
    sum += grow_to(ladder_derivative(grid.analyze(acc.dx[static_cast<std::size_t>(i)], base), i), out);
  return GenFuncRep(std::move(sum));
}

CoeffTensor ito_residual_tensor(const GenFuncRep& f, const Path& path, double t, const ItoOptions& opt) {
  if (f.time_class() == TimeClass::c0) throw InvalidInput("ito_residual: C0 elements have no time derivative");
  const std::size_t K = path.grid().index_of(t);
  const NodeGrid grid = path_grid(f, path, K, kPad);
  const Accumulated acc = accumulate(f, path, K, grid, opt, true);
  const int d = f.dim();
  const std::vector<int> base = padded(f.levels(), kPad);
  const std::vector<int> top = padded(f.levels(), kPad + 2);
  CoeffTensor r = grow_to(grid.analyze(acc.ends, base), top);
  if (!acc.dt_term.empty()) r -= grow_to(grid.analyze(acc.dt_term, base), top);
  for (int i = 0; i < d; ++i)
    r += grow_to(ladder_derivative(grid.analyze(acc.dx[static_cast<std::size_t>(i)], base), i), top);
  std::size_t slot = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const CoeffTensor b = grid.analyze(acc.bracket[slot++], base);
      const double w = i == j ? -0.5 : -1.0;
      r.axpy(w, grow_to(ladder_derivative(ladder_derivative(b, i), j), top));
    }
  }
  return r;
}

Functional Functional::at_point(std::vector<double> x) {
  Functional f;
  f.kind = Kind::point;
  std::string id = "point:";
  for (std::size_t i = 0; i < x.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%g", i ? ";" : "", x[i]);
    id += buf;
  }
  f.id = id;
  f.point = std::move(x);
  return f;
}

Functional Functional::test(std::string id, Evaluable fn) {
  Functional f;
  f.kind = Kind::test;
  f.id = std::move(id);
  f.fn = std::move(fn);
  return f;
}

std::vector<double> ito_residual(const GenFuncRep& f, const Path& path, double t,
                                 const std::vector<Functional>& functionals, const ItoOptions& opt) {
  const CoeffTensor r = ito_residual_tensor(f, path, t, opt);
  std::vector<double> out;
  for (const auto& fn : functionals) {
    if (fn.kind == Functional::Kind::point) {
      if (static_cast<int>(fn.point.size()) != f.dim()) throw InvalidInput("ito_residual: point dimension mismatch");
      out.push_back(synthesize(r, fn.point));
    } else {
      out.push_back(pair_with(r, fn.fn));
    }
  }
  return out;
}

std::vector<double> ito_residual_pointwise(const GenFuncRep& f, const Path& path, double t,
                                           const std::vector<std::vector<double>>& points, const ItoOptions& opt) {
  if (f.time_class() == TimeClass::c0) throw InvalidInput("ito_residual: C0 elements have no time derivative");
  const std::size_t K = path.grid().index_of(t);
  const int d = f.dim();
  for (const auto& y : points)
    if (static_cast<int>(y.size()) != d) throw InvalidInput("ito_residual_pointwise: point dimension mismatch");
  std::vector<CompensatedSum> acc(points.size());
  std::vector<double> z(static_cast<std::size_t>(d));
  auto eval = [&](const CoeffTensor& a, const std::vector<double>& y, std::span<const double> x) {
    for (int i = 0; i < d; ++i) z[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
    return synthesize(a, z);
  };
  std::vector<double> mid(static_cast<std::size_t>(d));
  for (std::size_t k = 0; k < K; ++k) {
    const double tk = path.grid().time(k);
    const CoeffTensor a = f.at_time(tk);
    std::vector<CoeffTensor> grad;
    for (int i = 0; i < d; ++i) grad.push_back(ladder_derivative(a, i));
    const auto xk = path.state(k);
    std::span<const double> xe = xk;
    if (opt.rule == EvalRule::midpoint) {
      const auto x1 = path.state(k + 1);
      for (int i = 0; i < d; ++i) mid[static_cast<std::size_t>(i)] = 0.5 * (xk[static_cast<std::size_t>(i)] + x1[static_cast<std::size_t>(i)]);
      xe = mid;
    }
    std::optional<CoeffTensor> adot;
    if (f.time_class() == TimeClass::c1) adot = f.time_derivative(tk);
    for (std::size_t p = 0; p < points.size(); ++p) {
      for (int i = 0; i < d; ++i) acc[p].add(eval(grad[static_cast<std::size_t>(i)], points[p], xe) * path.increment(k, i));
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
          const double w = i == j ? -0.5 : -1.0;
          acc[p].add(w * eval(ladder_derivative(grad[static_cast<std::size_t>(i)], j), points[p], xk) *
                     bracket_increment(path, k, i, j, opt.bracket));
        }
      if (adot) acc[p].add(-path.grid().step * eval(*adot, points[p], xk));
    }
  }
  std::vector<double> out;
  const CoeffTensor a_end = f.at_time(path.grid().time(K));
  const CoeffTensor a_0 = f.at_time(0.0);
  for (std::size_t p = 0; p < points.size(); ++p) {
    acc[p].add(eval(a_end, points[p], path.state(K)));
    acc[p].add(-eval(a_0, points[p], path.state(0)));
    out.push_back(acc[p].value());
  }
  return out;
}

double ustunel_weak_residual(const DistributionSpec& t_dist, const Path& path, const Evaluable& phi, double t,
                             int level, const ItoOptions& opt) {
  if (level < 0) throw InvalidInput("ustunel_weak_residual: negative level");
  const GenFuncRep f = embed(t_dist, BasisSpec::make(t_dist.dim(), level));
  return pair_with(ito_residual_tensor(f, path, t, opt), phi);
}

// -------------------------------------------------------------------- sweeps

double fit_log_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw InvalidInput("fit_log_slope: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw InvalidInput("fit_log_slope: values must be positive");
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

namespace {

double rms(std::vector<double> v) {
  for (double& x : v) x *= x;
  return std::sqrt(pairwise_sum(v) / static_cast<double>(v.size()));
}

}  // namespace

ItoReport ito_sweep(const GenFuncRep& f, double horizon, const std::vector<double>& steps, std::size_t n_paths,
                    std::uint64_t seed, const std::vector<Functional>& functionals, const ItoOptions& opt) {
  if (steps.empty()) throw InvalidInput("ito_sweep: no step sizes");
  if (functionals.empty()) throw InvalidInput("ito_sweep: no functionals");
  ItoReport rep;
  rep.steps = steps;
  rep.n_paths = n_paths;
  rep.seed = seed;
  rep.dim = f.dim();
  rep.horizon = horizon;
  for (const auto& fn : functionals) rep.functional_ids.push_back(fn.id);
  for (double dt : steps) {
    const TimeGrid grid = TimeGrid::make(horizon, dt);
    const PathEnsemble e = simulate_bm(f.dim(), grid, n_paths, seed);
    rep.scheme = e.scheme;
    std::vector<std::vector<double>> per_path(n_paths);
    parallel_for(n_paths, [&](std::size_t p) { per_path[p] = ito_residual(f, e.paths[p], horizon, functionals, opt); });
    std::vector<double> row;
    for (std::size_t j = 0; j < functionals.size(); ++j) {
      std::vector<double> col(n_paths);
      for (std::size_t p = 0; p < n_paths; ++p) col[p] = per_path[p][j];
      row.push_back(rms(std::move(col)));
    }
    rep.rms.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < functionals.size(); ++j) {
    std::vector<double> ys;
    for (const auto& row : rep.rms) ys.push_back(row[j]);
    bool positive = steps.size() > 1;
    for (double y : ys) positive = positive && y > 0.0;
    rep.fitted_order.push_back(positive ? fit_log_slope(steps, ys) : std::nan(""));
  }
  return rep;
}

WeakSweep ustunel_sweep(const DistributionSpec& t_dist, const Evaluable& phi, double horizon,
                        const std::vector<double>& steps, const std::vector<int>& levels, std::size_t n_paths,
                        std::uint64_t seed, const ItoOptions& opt) {
  if (steps.empty() || levels.empty()) throw InvalidInput("ustunel_sweep: empty step or level list");
  WeakSweep out;
  out.steps = steps;
  out.levels = levels;
  out.n_paths = n_paths;
  out.seed = seed;
  std::vector<GenFuncRep> reps;
  for (int level : levels) reps.push_back(embed(t_dist, BasisSpec::make(t_dist.dim(), level)));
  for (double dt : steps) {
    const PathEnsemble e = simulate_bm(t_dist.dim(), TimeGrid::make(horizon, dt), n_paths, seed);
    std::vector<std::vector<double>> r(n_paths);
    parallel_for(n_paths, [&](std::size_t p) {
      for (const auto& f : reps) r[p].push_back(pair_with(ito_residual_tensor(f, e.paths[p], horizon, opt), phi));
    });
    std::vector<double> row, gaps;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      std::vector<double> col(n_paths), diff(n_paths);
      for (std::size_t p = 0; p < n_paths; ++p) {
        col[p] = r[p][l];
        if (l > 0) diff[p] = r[p][l] - r[p][l - 1];
      }
      row.push_back(rms(std::move(col)));
      if (l > 0) gaps.push_back(rms(std::move(diff)));
    }
    out.rms.push_back(std::move(row));
    out.level_gaps.push_back(std::move(gaps));
  }
  std::vector<double> top;
  for (const auto& row : out.rms) top.push_back(row.back());
  out.fitted_order = steps.size() > 1 ? fit_log_slope(steps, top) : std::nan("");
  return out;
}

}  // namespace hgf
