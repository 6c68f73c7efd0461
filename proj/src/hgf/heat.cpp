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

#include "hgf/heat.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "hgf/error.hpp"
#include "hgf/ladder.hpp"
#include "hgf/parallel.hpp"
#include "hgf/rng.hpp"
#include "json.hpp"

namespace hgf {

namespace {

constexpr double kIdentityBelow = 1e-6;
constexpr std::size_t kChunk = 256;

// Running mean / sum of squared deviations (Welford; Chan merge in chunk order).
struct Moments {
  std::size_t n = 0;
  std::vector<double> mean, m2;

  explicit Moments(std::size_t width = 0) : mean(width, 0.0), m2(width, 0.0) {}

  void add(std::span<const double> x) {
    ++n;
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - mean[i];
      mean[i] += d * inv;
      m2[i] += d * (x[i] - mean[i]);
    }
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n), nt = na + nb;
    for (std::size_t i = 0; i < mean.size(); ++i) {
      const double d = o.mean[i] - mean[i];
      mean[i] += d * nb / nt;
      m2[i] += o.m2[i] + d * d * na * nb / nt;
    }
    n += o.n;
  }

  double se(std::size_t i) const {
    if (n < 2) return 0.0;
    return std::sqrt(m2[i] / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

struct McResult {
  CoeffTensor mean;
  CoeffTensor se;
  std::vector<double> fmean, fse;
};

// Per-path node values -> per-path coefficients (and pairings) -> moments.
McResult mc_reduce(const NodeGrid& grid, const std::vector<int>& levels, std::size_t n,
                   const std::function<void(std::size_t, std::vector<double>&)>& node_values,
                   const std::vector<CoeffTensor>& tracked) {
  const CoeffTensor shape_probe = grid.analyze(std::vector<double>(grid.size(), 0.0), levels);
  const std::size_t width = shape_probe.size();
  const std::size_t nf = tracked.size();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Moments> coeff(chunks, Moments(width)), fn(chunks, Moments(nf));
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<double> v(grid.size()), fv(nf);
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t p = c * kChunk; p < end; ++p) {
      std::fill(v.begin(), v.end(), 0.0);
      node_values(p, v);
      const CoeffTensor a = grid.analyze(v, levels);
      for (std::size_t j = 0; j < nf; ++j) fv[j] = pairing(a, tracked[j]);
      coeff[c].add(a.values());
      fn[c].add(fv);
    }
  });
  Moments total(width), ftotal(nf);
  for (std::size_t c = 0; c < chunks; ++c) {
    total.merge(coeff[c]);
    ftotal.merge(fn[c]);
  }
  McResult r{CoeffTensor(shape_probe.spec(), levels, total.mean), CoeffTensor(shape_probe.spec(), levels), {}, {}};
  for (std::size_t i = 0; i < width; ++i) r.se.values()[i] = total.se(i);
  for (std::size_t j = 0; j < nf; ++j) {
    r.fmean.push_back(ftotal.mean[j]);
    r.fse.push_back(ftotal.se(j));
  }
  return r;
}

double margin_for(double r, const BasisSpec& spec) {
  if (r > spec.halfwidth) throw InvalidInput("samples leave the quadrature window");
  return std::ceil(2.0 * r) / 2.0;
}

void check_times(const std::vector<double>& times, double horizon) {
  if (times.empty()) throw InvalidInput("heat: no output times");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || times[k] < 0.0) throw InvalidInput("heat: times must be finite and >= 0");
    if (times[k] > horizon * (1.0 + 1e-12)) throw InvalidInput("heat: time beyond the horizon");
    if (k > 0 && !(times[k] > times[k - 1])) throw InvalidInput("heat: times must be strictly increasing");
  }
}

CoeffTensor on_box(const CoeffTensor& a, const BasisSpec& spec) {
  if (a.dim() != spec.dim) throw InvalidInput("heat: dimension mismatch");
  return a.resized(spec.level).with_spec(spec);
}

// Brownian samples of path p at the given increasing times (flat, times x d).
std::vector<double> brownian_at(std::uint64_t seed, std::size_t p, int dim, const std::vector<double>& at) {
  NormalStream rng(seed, p, StreamPurpose::heat);
  const std::size_t d = static_cast<std::size_t>(dim);
  std::vector<double> out(at.size() * d);
  std::vector<double> b(d, 0.0);
  double prev = 0.0;
  for (std::size_t k = 0; k < at.size(); ++k) {
    const double sd = std::sqrt(at[k] - prev);
    for (std::size_t i = 0; i < d; ++i) {
      if (sd > 0.0) b[i] += sd * rng.normal();
      out[k * d + i] = b[i];
    }
    prev = at[k];
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b) {
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(static_cast<unsigned>(n), z);
      const double q = std::legendre(static_cast<unsigned>(n - 1), z);
      const double dp = n * (z * p - q) / (z * z - 1.0);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double p = std::legendre(static_cast<unsigned>(n), z);
    const double q = std::legendre(static_cast<unsigned>(n - 1), z);
    const double dp = n * (z * p - q) / (z * z - 1.0);
    x[static_cast<std::size_t>(i)] = 0.5 * (b - a) * z + 0.5 * (b + a);
    w[static_cast<std::size_t>(i)] = (b - a) / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

constexpr int kSourceNodes = 24;

}  // namespace

const char* to_string(HeatMethod m) { return m == HeatMethod::mc ? "mc" : "spectral"; }

Expectation expectation_translated(const GenFuncRep& f, const std::vector<std::vector<double>>& samples) {
  if (samples.empty()) throw InvalidInput("expectation_translated: no samples");
  if (!f.is_static()) throw InvalidInput("expectation_translated: expects a static element");
  double r = 0.0;
  for (const auto& s : samples) {
    if (static_cast<int>(s.size()) != f.dim()) throw InvalidInput("expectation_translated: sample dimension mismatch");
    for (double v : s) {
      if (!std::isfinite(v)) throw InvalidInput("expectation_translated: non-finite sample");
      r = std::max(r, std::abs(v));
    }
  }
  const NodeGrid grid(f.spec().widened(margin_for(r, f.spec())));
  const std::vector<int> levels(f.levels().begin(), f.levels().end());
  const McResult m = mc_reduce(grid, levels, samples.size(), [&](std::size_t p, std::vector<double>& v) {
    v = grid.synthesize_shifted(f.coeffs(), samples[p]);
  }, {});
  return {GenFuncRep(m.mean.with_spec(f.spec())), m.se.with_spec(f.spec())};
}

HeatSolution solve_mc(const HeatProblem& p, const BasisSpec& spec, std::vector<double> times, const McOptions& opt) {
  spec.validate();
  if (p.dim != spec.dim || p.initial.dim() != spec.dim) throw InvalidInput("solve_mc: dimension mismatch");
  if (opt.n_paths == 0) throw InvalidInput("solve_mc: n_paths must be >= 1");
  check_times(times, p.horizon);
  const CoeffTensor f0 = embed_coeffs(p.initial, spec);
  const std::vector<int> levels(f0.levels().begin(), f0.levels().end());
  const std::size_t d = static_cast<std::size_t>(spec.dim);

  // Sampling schedule: the source needs the whole path on a uniform grid.
  std::vector<double> at;
  std::vector<std::size_t> time_index;
  const bool with_source = p.source.has_value();
  if (with_source) {
    if (!(opt.source_step > 0.0)) throw InvalidInput("solve_mc: source_step must be positive");
    if (p.source->time_class() == TimeClass::c1) throw InvalidInput("solve_mc: source must be static or C0");
    const double tmax = times.back();
    const std::size_t K = static_cast<std::size_t>(std::llround(tmax / opt.source_step));
    for (std::size_t k = 0; k <= K; ++k) at.push_back(static_cast<double>(k) * opt.source_step);
    for (double t : times) {
      const double k = std::round(t / opt.source_step);
      if (std::abs(t - k * opt.source_step) > 1e-9 * opt.source_step)
        throw InvalidInput("solve_mc: output times must be multiples of source_step");
      time_index.push_back(static_cast<std::size_t>(k));
    }
  } else {
    at = times;
    for (std::size_t k = 0; k < times.size(); ++k) time_index.push_back(k);
  }

  double r = 0.0;
  {
    std::vector<double> rmax(opt.n_paths, 0.0);
    parallel_for(opt.n_paths, [&](std::size_t q) {
      for (double v : brownian_at(opt.seed, q, spec.dim, at)) rmax[q] = std::max(rmax[q], std::abs(v));
    });
    for (double v : rmax) r = std::max(r, v);
  }
  const NodeGrid grid(spec.widened(margin_for(r, spec)));
  std::vector<CoeffTensor> tracked;
  for (const auto& t : opt.tracked) tracked.push_back(grid.analyze(grid.sample(t.fn), levels));

  std::optional<CoeffTensor> g_static;
  if (with_source && p.source->is_static()) g_static = on_box(p.source->coeffs(), spec);

  HeatSolution sol;
  sol.method = HeatMethod::mc;
  sol.times = times;
  sol.source = p.source;
  for (const auto& t : opt.tracked) sol.tracked_ids.push_back(t.id);
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    const double t = times[ti];
    if (t == 0.0) {
      sol.reps.emplace_back(f0);
      sol.mc_se.push_back(CoeffTensor(spec, levels));
      std::vector<double> fv;
      for (const auto& a : tracked) fv.push_back(pairing(f0.resized(levels).with_spec(a.spec()), a));
      sol.tracked_value.push_back(fv);
      sol.tracked_se.push_back(std::vector<double>(fv.size(), 0.0));
      continue;
    }
    const std::size_t kt = time_index[ti];
    // Source slices g(t - r_k) for the left-point sum.
    std::vector<CoeffTensor> g_slices;
    if (with_source && !g_static)
      for (std::size_t k = 0; k < kt; ++k) g_slices.push_back(on_box(p.source->at_time(t - at[k]), spec));
    const McResult m = mc_reduce(grid, levels, opt.n_paths, [&](std::size_t q, std::vector<double>& v) {
      const std::vector<double> b = brownian_at(opt.seed, q, spec.dim, at);
      const std::span<const double> bt(b.data() + kt * d, d);
      v = grid.synthesize_shifted(f0, bt);
      if (!with_source) return;
      for (std::size_t k = 0; k < kt; ++k) {
        const std::span<const double> bk(b.data() + k * d, d);
        const std::vector<double> s = grid.synthesize_shifted(g_static ? *g_static : g_slices[k], bk);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += opt.source_step * s[i];
      }
    }, tracked);
    sol.reps.emplace_back(m.mean.with_spec(spec));
    sol.mc_se.push_back(m.se.with_spec(spec));
    sol.tracked_value.push_back(m.fmean);
    sol.tracked_se.push_back(m.fse);
  }
  return sol;
}

CoeffTensor heat_convolve(const CoeffTensor& a, double t) {
  if (!std::isfinite(t) || t < 0.0) throw InvalidInput("heat_convolve: time must be >= 0");
  if (t < kIdentityBelow) return a;
  const int d = a.dim();
  const int top = a.spec().level;
  int J = std::min(2 * top + 40, 400);
  if (d > 1) J = std::min(J, 64);
  const auto rule = normal_rule(J);
  const NodeGrid grid(a.spec());
  const double s = std::sqrt(t);
  std::vector<double> acc(grid.size(), 0.0), shift(static_cast<std::size_t>(d));
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  const std::size_t total = static_cast<std::size_t>(std::pow(J, d));
  for (std::size_t c = 0; c < total; ++c) {
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      const std::size_t j = static_cast<std::size_t>(idx[static_cast<std::size_t>(i)]);
      shift[static_cast<std::size_t>(i)] = s * rule->nodes[j];
      w *= rule->weights[j];
    }
    const std::vector<double> v = grid.synthesize_shifted(a, shift);
    for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += w * v[q];
    for (int i = d; i-- > 0;) {
      if (++idx[static_cast<std::size_t>(i)] < J) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return grid.analyze(acc, std::vector<int>(a.levels().begin(), a.levels().end()));
}

HeatSolution solve_spectral(const HeatProblem& p, const BasisSpec& spec, std::vector<double> times) {
  spec.validate();
  if (p.dim != spec.dim || p.initial.dim() != spec.dim) throw InvalidInput("solve_spectral: dimension mismatch");
  for (double t : times)
    if (t < 0.0) throw InvalidInput("solve_spectral: negative time");
  check_times(times, p.horizon);
  if (p.source && p.source->time_class() == TimeClass::c1) throw InvalidInput("solve_spectral: source must be static or C0");
  const CoeffTensor f0 = embed_coeffs(p.initial, spec);
  HeatSolution sol;
  sol.method = HeatMethod::spectral;
  sol.times = times;
  sol.source = p.source;
  std::vector<std::optional<CoeffTensor>> out(times.size());
  parallel_for(times.size(), [&](std::size_t k) {
    const double t = times[k];
    CoeffTensor u = heat_convolve(f0, t);
    if (p.source && t > 0.0) {
      const auto [s, w] = gauss_legendre(kSourceNodes, 0.0, t);
      for (std::size_t i = 0; i < s.size(); ++i)
        u.axpy(w[i], heat_convolve(on_box(p.source->at_time(s[i]), spec), t - s[i]));
    }
    out[k] = u.with_spec(spec);
  });
  for (auto& u : out) sol.reps.emplace_back(std::move(*u));
  return sol;
}

double pde_residual(const HeatSolution& sol, const Evaluable& phi, double t) {
  const auto& ts = sol.times;
  std::size_t k = ts.size();
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (std::abs(ts[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) k = i;
  if (k == ts.size()) throw InvalidInput("pde_residual: t is not a stored time");
  if (k == 0 || k + 1 == ts.size()) throw InvalidInput("pde_residual: t must be an interior stored time");
  const CoeffTensor& u = sol.reps[k].coeffs();
  std::vector<int> top(u.levels().begin(), u.levels().end());
  for (int& l : top) l += 2;
  CoeffTensor du = sol.reps[k + 1].coeffs() - sol.reps[k - 1].coeffs();
  du *= 1.0 / (ts[k + 1] - ts[k - 1]);
  CoeffTensor r = du.resized(top);
  for (int i = 0; i < u.dim(); ++i) r.axpy(-0.5, ladder_derivative(ladder_derivative(u, i), i).resized(top));
  if (sol.source) r -= sol.source->at_time(t).resized(top);
  return std::abs(pair_with(r, phi));
}

UniquenessReport uniqueness_probe(const HeatSolution& a, const HeatSolution& b, const std::vector<TestFunction>& tests,
                                  const std::vector<int>& levels, double tol) {
  if (a.times.size() != b.times.size()) throw InvalidInput("uniqueness_probe: time grids differ");
  for (std::size_t k = 0; k < a.times.size(); ++k)
    if (std::abs(a.times[k] - b.times[k]) > 1e-12) throw InvalidInput("uniqueness_probe: time grids differ");
  UniquenessReport rep;
  rep.times = a.times;
  rep.verdict = true;
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    rep.reports.push_back(associated(a.reps[k], b.reps[k], tests, levels, tol));
    rep.verdict = rep.verdict && rep.reports.back().verdict;
  }
  return rep;
}

void save_solution(const HeatSolution& sol, const std::filesystem::path& stem) {
  for (std::size_t k = 0; k < sol.reps.size(); ++k)
    save_rep(sol.reps[k], stem.parent_path() / (stem.filename().string() + "_" + std::to_string(k)));
  nlohmann::json j;
  j["method"] = to_string(sol.method);
  j["times"] = sol.times;
  const auto path = stem.parent_path() / (stem.filename().string() + ".json");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace hgf
