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

// Path simulation and the Ito calculus of translated representatives.
//
// Translation convention: (tau_x f)(y) = f(y - x), so the spatial gradient of
// tau_{X_s} f is tau_{X_s} (grad f) and the Ito expansion reads
//   tau_{X_t} f = tau_{X_0} f + int d_t tau f ds - int grad tau f . dX
//                 + 1/2 sum_ij int d_ij tau f d<X^i, X^j>.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hgf/gen_func.hpp"

namespace hgf {

struct TimeGrid {
  double horizon = 1.0;
  double step = 1.0;
  std::size_t steps = 1;

  // Requires horizon / step to be an integer (to 1e-9 relative).
  static TimeGrid make(double horizon, double step);
  double time(std::size_t k) const noexcept { return k == steps ? horizon : static_cast<double>(k) * step; }
  // Index of a time on the grid; throws if t is not a grid time.
  std::size_t index_of(double t) const;
};

class Path {
 public:
  // values: (steps + 1) x dim, row-major.
  Path(TimeGrid grid, int dim, std::vector<double> values);

  const TimeGrid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return dim_; }
  std::size_t steps() const noexcept { return grid_.steps; }
  std::span<const double> state(std::size_t k) const;
  double increment(std::size_t k, int i) const;
  double realized_cov(std::size_t k, int i, int j) const { return increment(k, i) * increment(k, j); }

  // Model bracket increments d<X^i,X^j> over step k (sigma sigma^T dt for
  // diffusions, dt * I for Brownian motion, 0 for smooth paths).
  bool has_model_cov() const noexcept { return cov_kind_ != CovKind::none; }
  double model_cov(std::size_t k, int i, int j) const;
  void set_model_cov(std::vector<double> per_step);  // steps x dim x dim
  void set_unit_rate_cov() noexcept { cov_kind_ = CovKind::unit_rate; }
  void set_zero_cov() noexcept { cov_kind_ = CovKind::zero; }

  // Scalar finite-variation integrator V with running total variation |V|.
  bool has_fv() const noexcept { return !fv_.empty(); }
  void set_fv(std::vector<double> v);
  double fv(std::size_t k) const { return fv_.at(k); }
  double total_variation(std::size_t k) const { return tv_.at(k); }

  double max_abs() const noexcept;
  std::span<const double> values() const noexcept { return values_; }

 private:
  enum class CovKind { none, zero, unit_rate, stored };

  TimeGrid grid_;
  int dim_ = 1;
  std::vector<double> values_;
  CovKind cov_kind_ = CovKind::none;
  std::vector<double> cov_;
  std::vector<double> fv_, tv_;
};

struct PathEnsemble {
  std::vector<Path> paths;
  std::uint64_t seed = 0;
  std::string scheme;
  int dim = 1;
  TimeGrid grid;
};

using DriftFn = std::function<void(double t, std::span<const double> x, std::span<double> out)>;
// out is dim x dim row-major; column j multiplies dB^j.
using DiffusionFn = std::function<void(double t, std::span<const double> x, std::span<double> out)>;

PathEnsemble simulate_bm(int dim, const TimeGrid& grid, std::size_t count, std::uint64_t seed);
PathEnsemble simulate_ito(int dim, const TimeGrid& grid, const DriftFn& drift, const DiffusionFn& diffusion,
                          std::vector<double> x0, std::size_t count, std::uint64_t seed);

Path constant_path(const TimeGrid& grid, std::vector<double> x0);
Path deterministic_path(const TimeGrid& grid, int dim, const std::function<void(double, std::span<double>)>& x);
Path time_reversed(const Path& p);

/// sum_k tau_{X_k} f(t_k) (V_{k+1} - V_k) over grid steps below t.
GenFuncRep stieltjes_integral(const GenFuncRep& f, const Path& path, double t);

struct TriangleBound {
  double lhs = 0.0;  // |int tau f dV|_n
  double rhs = 0.0;  // sum_k |tau_{X_k} f|_n |dV_k|
};
TriangleBound check_triangle_bound(const GenFuncRep& f, const Path& path, int n, double t);

enum class BracketMode { model, realized };
enum class EvalRule { left, midpoint };

const char* to_string(BracketMode m);
const char* to_string(EvalRule r);

struct ItoOptions {
  BracketMode bracket = BracketMode::model;
  EvalRule rule = EvalRule::left;
};

/// sum_i sum_k (d_i tau_{X_k} f) dX^i_k; levels grow by one on every axis.
GenFuncRep ito_integral(const GenFuncRep& f, const Path& path, double t, EvalRule rule = EvalRule::left);

struct Functional {
  enum class Kind { point, test };
  std::string id;
  Kind kind = Kind::test;
  std::vector<double> point;
  Evaluable fn;

  static Functional at_point(std::vector<double> x);
  static Functional test(std::string id, Evaluable fn);
};

/// Coefficients of tau_{X_t} f - tau_{X_0} f - int d_t tau f ds + int grad tau f . dX
///   - 1/2 sum_ij int d_ij tau f d<X^i,X^j>, on a box padded by four levels.
CoeffTensor ito_residual_tensor(const GenFuncRep& f, const Path& path, double t, const ItoOptions& opt = {});

/// The residual under each functional (point evaluation or pairing).
std::vector<double> ito_residual(const GenFuncRep& f, const Path& path, double t,
                                 const std::vector<Functional>& functionals, const ItoOptions& opt = {});

/// Point-evaluation residual without re-expansion (synthesis at shifted arguments).
std::vector<double> ito_residual_pointwise(const GenFuncRep& f, const Path& path, double t,
                                           const std::vector<std::vector<double>>& points, const ItoOptions& opt = {});

/// Residual of the weak Ito formula for embed(T) at `level`, paired with phi.
double ustunel_weak_residual(const DistributionSpec& t_dist, const Path& path, const Evaluable& phi, double t,
                             int level, const ItoOptions& opt = {});

struct ItoReport {
  std::vector<double> steps;
  std::vector<std::string> functional_ids;
  std::vector<std::vector<double>> rms;  // rms[step][functional]
  std::vector<double> fitted_order;      // per functional
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  std::string scheme;
  int dim = 1;
  double horizon = 1.0;
};

/// log-log least-squares slope of ys against xs.
double fit_log_slope(std::span<const double> xs, std::span<const double> ys);

/// RMS residual over Brownian paths for every step size and functional.
ItoReport ito_sweep(const GenFuncRep& f, double horizon, const std::vector<double>& steps, std::size_t n_paths,
                    std::uint64_t seed, const std::vector<Functional>& functionals, const ItoOptions& opt = {});

struct WeakSweep {
  std::vector<double> steps;
  std::vector<int> levels;
  std::vector<std::vector<double>> rms;         // rms[step][level]
  std::vector<std::vector<double>> level_gaps;  // rms over paths of R(level k+1) - R(level k)
  double fitted_order = 0.0;                    // slope of rms at the top level
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
};

WeakSweep ustunel_sweep(const DistributionSpec& t_dist, const Evaluable& phi, double horizon,
                        const std::vector<double>& steps, const std::vector<int>& levels, std::size_t n_paths,
                        std::uint64_t seed, const ItoOptions& opt = {});

}  // namespace hgf
