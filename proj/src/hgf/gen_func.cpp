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

#include "hgf/gen_func.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hgf/error.hpp"
#include "hgf/hermite.hpp"
#include "hgf/ladder.hpp"
#include "json.hpp"

namespace hgf {

namespace {

double inf_norm(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

void require_finite_point(std::span<const double> x, const char* who) {
  for (double v : x)
    if (!std::isfinite(v)) throw InvalidInput(std::string(who) + ": point has non-finite coordinate");
}

// Tensor product of per-axis vectors on the box of `out`.
void fill_product(CoeffTensor& out, const std::vector<std::vector<double>>& axes) {
  const std::size_t d = axes.size();
  std::vector<int> beta(d, 0);
  auto v = out.values();
  for (std::size_t f = 0; f < v.size(); ++f) {
    double p = 1.0;
    for (std::size_t i = 0; i < d; ++i) p *= axes[i][static_cast<std::size_t>(beta[i])];
    v[f] = p;
    for (std::size_t i = d; i-- > 0;) {
      if (++beta[i] <= out.level(static_cast<int>(i))) break;
      beta[i] = 0;
    }
  }
}

// Spec sharing quadrature settings wide enough for both operands.
BasisSpec common_spec(const BasisSpec& a, const BasisSpec& b, int level) {
  BasisSpec s = a;
  s.level = level;
  s.halfwidth = std::max(a.halfwidth, b.halfwidth);
  s.nodes = std::max(a.nodes, b.nodes);
  s.defect_tol = std::max(a.defect_tol, b.defect_tol);
  return s.with_level(level);
}

std::vector<int> max_levels(std::span<const int> a, std::span<const int> b) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

CoeffTensor product_kernel(const CoeffTensor& a, const CoeffTensor& b) {
  if (a.dim() != b.dim()) throw InvalidInput("multiply: dimension mismatch");
  if (!a.same_box(b)) throw InvalidInput("multiply: operands live on different boxes");
  std::vector<int> levels(a.levels().begin(), a.levels().end());
  for (int& l : levels) l *= 2;
  const int top = *std::max_element(levels.begin(), levels.end());
  const NodeGrid grid(common_spec(a.spec(), b.spec(), top));
  std::vector<double> u = grid.synthesize(a);
  const std::vector<double> w = grid.synthesize(b);
  for (std::size_t q = 0; q < u.size(); ++q) u[q] *= w[q];
  return grid.analyze(u, levels);
}

}  // namespace

const char* to_string(TimeClass c) {
  switch (c) {
    case TimeClass::static_element: return "static";
    case TimeClass::c0: return "C0";
    case TimeClass::c1: return "C1";
  }
  return "static";
}

TimeClass time_class_from_string(const std::string& s) {
  if (s == "static") return TimeClass::static_element;
  if (s == "C0") return TimeClass::c0;
  if (s == "C1") return TimeClass::c1;
  throw InvalidInput("unknown time class '" + s + "'");
}

// ---------------------------------------------------------- DistributionSpec

DistributionSpec DistributionSpec::dirac(std::vector<double> point) {
  if (point.empty()) throw InvalidInput("dirac: empty point");
  require_finite_point(point, "dirac");
  DistributionSpec s;
  s.kind_ = Kind::dirac;
  s.dim_ = static_cast<int>(point.size());
  s.point_ = std::move(point);
  return s;
}

DistributionSpec DistributionSpec::dirac_derivative(std::vector<double> point, int axis) {
  DistributionSpec s = dirac(std::move(point));
  if (axis < 0 || axis >= s.dim_) throw InvalidInput("dirac_derivative: axis out of range");
  s.kind_ = Kind::dirac_derivative;
  s.axis_ = axis;
  return s;
}

DistributionSpec DistributionSpec::sampled(Evaluable f, int dim) {
  if (!f) throw InvalidInput("sampled_function: empty evaluable");
  if (dim < 1) throw InvalidInput("sampled_function: dimension must be >= 1");
  DistributionSpec s;
  s.kind_ = Kind::sampled_function;
  s.dim_ = dim;
  s.function_ = std::move(f);
  return s;
}

DistributionSpec DistributionSpec::coefficients(CoeffTensor a) {
  DistributionSpec s;
  s.kind_ = Kind::coefficient_list;
  s.dim_ = a.dim();
  s.coeffs_ = std::move(a);
  return s;
}

DistributionSpec DistributionSpec::combination(std::vector<std::pair<double, DistributionSpec>> terms) {
  if (terms.empty()) throw InvalidInput("combination: no terms");
  DistributionSpec s;
  s.kind_ = Kind::combination;
  s.dim_ = terms.front().second.dim();
  for (const auto& [c, t] : terms) {
    if (!std::isfinite(c)) throw InvalidInput("combination: non-finite weight");
    if (t.dim() != s.dim_) throw InvalidInput("combination: terms differ in dimension");
  }
  s.terms_ = std::move(terms);
  return s;
}

int DistributionSpec::dim() const { return dim_; }

// ---------------------------------------------------------------- GenFuncRep

GenFuncRep::GenFuncRep(CoeffTensor coeffs) { values_.push_back(std::move(coeffs)); }

GenFuncRep::GenFuncRep(TimeClass cls, std::vector<double> time_grid, std::vector<CoeffTensor> values,
                       std::vector<CoeffTensor> derivatives)
    : class_(cls), time_grid_(std::move(time_grid)), values_(std::move(values)), derivatives_(std::move(derivatives)) {
  if (cls == TimeClass::static_element) throw InvalidInput("GenFuncRep: static elements carry no time grid");
  if (time_grid_.size() < 2) throw InvalidInput("GenFuncRep: time grid needs at least two nodes");
  if (values_.size() != time_grid_.size()) throw InvalidInput("GenFuncRep: one tensor per time node required");
  for (std::size_t k = 0; k < time_grid_.size(); ++k) {
    if (!std::isfinite(time_grid_[k])) throw InvalidInput("GenFuncRep: non-finite time node");
    if (k > 0 && !(time_grid_[k] > time_grid_[k - 1]))
      throw InvalidInput("GenFuncRep: time grid must be strictly increasing");
  }
  for (const auto& v : values_)
    if (!v.same_box(values_.front())) throw InvalidInput("GenFuncRep: node tensors differ in box");
  if (cls == TimeClass::c0 && !derivatives_.empty())
    throw InvalidInput("GenFuncRep: C0 elements carry no time derivative");
  if (cls == TimeClass::c1) {
    if (derivatives_.empty()) {
      // Slopes of the piecewise-linear interpolant (forward, last node backward).
      const std::size_t n = time_grid_.size();
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t a = k + 1 < n ? k : k - 1;
        CoeffTensor s = values_[a + 1] - values_[a];
        s *= 1.0 / (time_grid_[a + 1] - time_grid_[a]);
        derivatives_.push_back(std::move(s));
      }
    } else if (derivatives_.size() != values_.size()) {
      throw InvalidInput("GenFuncRep: one derivative tensor per time node required");
    }
    for (const auto& v : derivatives_)
      if (!v.same_box(values_.front())) throw InvalidInput("GenFuncRep: derivative tensors differ in box");
  }
}

const CoeffTensor& GenFuncRep::coeffs() const& {
  if (!is_static()) throw InvalidInput("GenFuncRep::coeffs: element is time-dependent");
  return values_.front();
}

CoeffTensor GenFuncRep::coeffs() && {
  if (!is_static()) throw InvalidInput("GenFuncRep::coeffs: element is time-dependent");
  return std::move(values_.front());
}

std::size_t GenFuncRep::locate(double t) const {
  const double lo = time_grid_.front(), hi = time_grid_.back();
  const double slack = 1e-12 * std::max(1.0, hi - lo);
  if (!(t >= lo - slack && t <= hi + slack)) throw InvalidInput("GenFuncRep: time outside the grid");
  auto it = std::upper_bound(time_grid_.begin(), time_grid_.end(), t);
  std::size_t k = it == time_grid_.begin() ? 0 : static_cast<std::size_t>(it - time_grid_.begin()) - 1;
  return std::min(k, time_grid_.size() - 2);
}

CoeffTensor GenFuncRep::at_time(double t) const {
  if (is_static()) return values_.front();
  const std::size_t k = locate(t);
  const double theta = std::clamp((t - time_grid_[k]) / (time_grid_[k + 1] - time_grid_[k]), 0.0, 1.0);
  if (theta == 0.0) return values_[k];
  if (theta == 1.0) return values_[k + 1];
  CoeffTensor out = values_[k];
  out *= 1.0 - theta;
  out.axpy(theta, values_[k + 1]);
  return out;
}

CoeffTensor GenFuncRep::time_derivative(double t) const {
  if (is_static()) {
    CoeffTensor z = values_.front();
    z *= 0.0;
    return z;
  }
  if (class_ == TimeClass::c0) throw InvalidInput("GenFuncRep: C0 element has no time derivative");
  const std::size_t k = locate(t);
  CoeffTensor out = values_[k + 1] - values_[k];
  out *= 1.0 / (time_grid_[k + 1] - time_grid_[k]);
  return out;
}

GenFuncRep GenFuncRep::map(const std::function<CoeffTensor(const CoeffTensor&)>& fn) const {
  if (is_static()) return GenFuncRep(fn(values_.front()));
  std::vector<CoeffTensor> v, dv;
  for (const auto& a : values_) v.push_back(fn(a));
  for (const auto& a : derivatives_) dv.push_back(fn(a));
  return GenFuncRep(class_, time_grid_, std::move(v), std::move(dv));
}

GenFuncRep GenFuncRep::partial(int level) const {
  if (level < 0) throw InvalidInput("GenFuncRep::partial: negative level");
  return map([&](const CoeffTensor& a) {
    std::vector<int> lv(a.levels().begin(), a.levels().end());
    for (int& l : lv) l = std::min(l, level);
    return a.resized(lv).with_spec(a.spec().with_level(*std::max_element(lv.begin(), lv.end())));
  });
}

double GenFuncRep::evaluate(std::span<const double> x, double t) const { return synthesize(at_time(t), x); }

// -------------------------------------------------------------------- embed

CoeffTensor embed_coeffs(const DistributionSpec& t, const BasisSpec& spec) {
  spec.validate();
  if (t.dim() != spec.dim) throw InvalidInput("embed: distribution and basis dimensions differ");
  const std::size_t d = static_cast<std::size_t>(spec.dim);
  switch (t.kind()) {
    case DistributionSpec::Kind::dirac:
    case DistributionSpec::Kind::dirac_derivative: {
      if (inf_norm(t.point()) > spec.halfwidth) throw InvalidInput("embed: point lies outside the quadrature window");
      std::vector<std::vector<double>> axes(d, std::vector<double>(static_cast<std::size_t>(spec.level) + 1));
      for (std::size_t i = 0; i < d; ++i) {
        if (t.kind() == DistributionSpec::Kind::dirac_derivative && static_cast<int>(i) == t.axis()) {
          hermite_func_derivs(spec.level, t.point()[i], axes[i]);
          for (double& v : axes[i]) v = -v;
        } else {
          hermite_funcs(spec.level, t.point()[i], axes[i]);
        }
      }
      CoeffTensor out(spec);
      fill_product(out, axes);
      return out;
    }
    case DistributionSpec::Kind::sampled_function:
      return analyze(t.function(), spec);
    case DistributionSpec::Kind::coefficient_list:
      return t.coeffs();
    case DistributionSpec::Kind::combination: {
      CoeffTensor out(spec);
      for (const auto& [c, term] : t.terms()) {
        CoeffTensor a = embed_coeffs(term, spec);
        if (!a.same_box(out)) a = a.resized(std::vector<int>(out.levels().begin(), out.levels().end()));
        out.axpy(c, a);
      }
      return out;
    }
  }
  throw InvalidInput("embed: unsupported distribution kind");
}

GenFuncRep embed(const DistributionSpec& t, const BasisSpec& spec) { return GenFuncRep(embed_coeffs(t, spec)); }

// --------------------------------------------------------- algebra operations

GenFuncRep multiply(const GenFuncRep& f, const GenFuncRep& g) {
  if (f.is_static() && g.is_static()) return GenFuncRep(product_kernel(f.coeffs(), g.coeffs()));
  if (f.is_static() != g.is_static() || !std::equal(f.time_grid().begin(), f.time_grid().end(),
                                                     g.time_grid().begin(), g.time_grid().end()))
    throw InvalidInput("multiply: time-dependent operands need a common time grid");
  const auto& fv = f.node_values();
  const auto& gv = g.node_values();
  std::vector<CoeffTensor> v, dv;
  for (std::size_t k = 0; k < fv.size(); ++k) v.push_back(product_kernel(fv[k], gv[k]));
  TimeClass cls = TimeClass::c0;
  if (f.time_class() == TimeClass::c1 && g.time_class() == TimeClass::c1) {
    cls = TimeClass::c1;
    for (std::size_t k = 0; k < fv.size(); ++k)
      dv.push_back(product_kernel(f.node_derivatives()[k], gv[k]) + product_kernel(fv[k], g.node_derivatives()[k]));
  }
  return GenFuncRep(cls, std::vector<double>(f.time_grid().begin(), f.time_grid().end()), std::move(v),
                    std::move(dv));
}

GenFuncRep differentiate(const GenFuncRep& f, const MultiIndex& alpha) {
  if (alpha.dim() != f.dim()) throw InvalidInput("differentiate: multi-index dimension mismatch");
  return f.map([&](const CoeffTensor& a) {
    CoeffTensor out = a;
    for (int i = 0; i < alpha.dim(); ++i)
      for (int r = 0; r < alpha[i]; ++r) out = ladder_derivative(out, i);
    return out;
  });
}

CoeffTensor translate_coeffs(const CoeffTensor& a, std::span<const double> x) {
  if (static_cast<int>(x.size()) != a.dim()) throw InvalidInput("translate: shift dimension mismatch");
  require_finite_point(x, "translate");
  const double r = inf_norm(x);
  if (r > a.spec().halfwidth) throw InvalidInput("translate: shift exceeds the quadrature window");
  if (r == 0.0) return a;
  const NodeGrid grid(a.spec().widened(r));
  const std::vector<double> u = grid.synthesize_shifted(a, x);
  return grid.analyze(u, std::vector<int>(a.levels().begin(), a.levels().end()));
}

GenFuncRep translate(const GenFuncRep& f, std::span<const double> x) {
  return f.map([&](const CoeffTensor& a) { return translate_coeffs(a, x); });
}

// --------------------------------------------------------------- association

double pair_with(const CoeffTensor& u, const Evaluable& phi) {
  const NodeGrid grid(u.spec());
  const std::vector<double> v = grid.synthesize(u);
  const std::vector<double> p = grid.sample(phi);
  return grid.integrate(v, p);
}

AssociationReport associated(const RepFamily& f, const RepFamily& g, const std::vector<TestFunction>& tests,
                             const std::vector<int>& levels, double tol) {
  if (tests.empty()) throw InvalidInput("associated: no test functions");
  if (levels.empty()) throw InvalidInput("associated: no levels");
  for (std::size_t k = 0; k < levels.size(); ++k)
    if (levels[k] < 0 || (k > 0 && levels[k] <= levels[k - 1]))
      throw InvalidInput("associated: levels must be non-negative and increasing");
  if (!(tol > 0.0)) throw InvalidInput("associated: tolerance must be positive");

  AssociationReport rep;
  rep.levels = levels;
  rep.tolerance = tol;
  for (const auto& t : tests) rep.test_ids.push_back(t.id);
  for (int level : levels) {
    const GenFuncRep fb = f(level);
    const GenFuncRep gb = g(level);
    const CoeffTensor& a = fb.coeffs();
    const CoeffTensor& b = gb.coeffs();
    if (a.dim() != b.dim()) throw InvalidInput("associated: dimension mismatch");
    const std::vector<int> box = max_levels(a.levels(), b.levels());
    const BasisSpec s = common_spec(a.spec(), b.spec(), *std::max_element(box.begin(), box.end()));
    CoeffTensor diff = a.resized(box).with_spec(s);
    diff -= b.resized(box).with_spec(s);
    const NodeGrid grid(s);
    const std::vector<double> u = grid.synthesize(diff);
    std::vector<double> row;
    for (const auto& t : tests) row.push_back(std::abs(grid.integrate(u, grid.sample(t.fn))));
    rep.gaps.push_back(std::move(row));
  }

  constexpr double kFloor = 1e-14;
  rep.verdict = true;
  for (std::size_t j = 0; j < tests.size(); ++j) {
    bool strict = true;
    for (std::size_t k = 1; k < levels.size(); ++k) {
      const double prev = rep.gaps[k - 1][j], cur = rep.gaps[k][j];
      if (!(cur < prev) && !(std::max(cur, prev) <= kFloor)) strict = false;
    }
    bool eventually = true;
    if (levels.size() > 1) {
      const double prev = rep.gaps[levels.size() - 2][j], cur = rep.gaps.back()[j];
      eventually = cur <= prev || cur <= kFloor;
    }
    rep.strictly_decreasing.push_back(strict);
    rep.eventually_decreasing.push_back(eventually);
    if (!eventually || !(rep.gaps.back()[j] < tol)) rep.verdict = false;
  }
  return rep;
}

AssociationReport associated(const GenFuncRep& f, const GenFuncRep& g, const std::vector<TestFunction>& tests,
                             const std::vector<int>& levels, double tol) {
  if (!f.is_static() || !g.is_static()) throw InvalidInput("associated: time-dependent elements; compare at_time slices");
  return associated([&](int level) { return f.partial(level); }, [&](int level) { return g.partial(level); }, tests,
                    levels, tol);
}

// ---------------------------------------------------------- property checks

std::vector<TranslationBoundRow> check_translation_bound(const Evaluable& phi, int n,
                                                         const std::vector<std::vector<double>>& shifts,
                                                         const BasisSpec& spec) {
  if (n < 0) throw InvalidInput("check_translation_bound: n must be >= 0");
  const double base = seminorm(analyze(phi, spec), n);
  std::vector<TranslationBoundRow> rows;
  for (const auto& x : shifts) {
    if (static_cast<int>(x.size()) != spec.dim) throw InvalidInput("check_translation_bound: shift dimension mismatch");
    require_finite_point(x, "check_translation_bound");
    double norm2 = 0.0;
    for (double v : x) norm2 += v * v;
    const double len = std::sqrt(norm2);
    Evaluable shifted = [&phi, &x](std::span<const double> y) {
      std::vector<double> z(y.begin(), y.end());
      for (std::size_t i = 0; i < z.size(); ++i) z[i] -= x[i];
      return phi(z);
    };
    TranslationBoundRow row;
    row.shift = x;
    row.seminorm_base = base;
    row.seminorm_shifted = seminorm(analyze(shifted, spec.widened(inf_norm(x))), n);
    row.ratio = row.seminorm_shifted / (std::pow(1.0 + len, 2 * n) * base);
    rows.push_back(std::move(row));
  }
  return rows;
}

double multiplication_ratio(const Evaluable& phi, const Evaluable& psi, int n, int r, int s, const BasisSpec& spec) {
  if (n < 0 || r < 0 || s < 0) throw InvalidInput("multiplication_ratio: orders must be >= 0");
  const Evaluable prod = [&](std::span<const double> x) { return phi(x) * psi(x); };
  return seminorm(analyze(prod, spec), n) / (seminorm(analyze(phi, spec), r) * seminorm(analyze(psi, spec), s));
}

GenFuncRep scale_in_time(const std::function<double(double)>& h, const std::function<double(double)>& dh,
                         const GenFuncRep& f, std::vector<double> time_grid) {
  if (!f.is_static()) throw InvalidInput("scale_in_time: expects a static element");
  if (!h || !dh) throw InvalidInput("scale_in_time: empty scalar function");
  std::vector<CoeffTensor> v, dv;
  for (double t : time_grid) {
    CoeffTensor a = f.coeffs();
    a *= h(t);
    v.push_back(std::move(a));
    CoeffTensor b = f.coeffs();
    b *= dh(t);
    dv.push_back(std::move(b));
  }
  return GenFuncRep(TimeClass::c1, std::move(time_grid), std::move(v), std::move(dv));
}

// --------------------------------------------------------------- persistence

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const std::string& suffix) {
  return stem.parent_path() / (stem.filename().string() + suffix);
}

}  // namespace

void save_rep(const GenFuncRep& f, const std::filesystem::path& stem) {
  nlohmann::json j;
  j["dim"] = f.dim();
  j["level"] = f.spec().level;
  j["time_class"] = to_string(f.time_class());
  j["time_grid"] = std::vector<double>(f.time_grid().begin(), f.time_grid().end());
  if (f.is_static()) {
    write_coeff_csv(f.coeffs(), with_suffix(stem, ".csv"));
  } else {
    for (std::size_t k = 0; k < f.node_values().size(); ++k) {
      write_coeff_csv(f.node_values()[k], with_suffix(stem, "_t" + std::to_string(k) + ".csv"));
      if (f.time_class() == TimeClass::c1)
        write_coeff_csv(f.node_derivatives()[k], with_suffix(stem, "_dt" + std::to_string(k) + ".csv"));
    }
  }
  std::ofstream out(with_suffix(stem, ".json"));
  if (!out) throw IoError("cannot write sidecar " + with_suffix(stem, ".json").string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + with_suffix(stem, ".json").string());
}

GenFuncRep load_rep(const std::filesystem::path& stem) {
  const auto side = with_suffix(stem, ".json");
  std::ifstream in(side);
  if (!in) throw IoError("cannot open sidecar " + side.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed sidecar " + side.string() + ": " + e.what());
  }
  try {
    const int dim = j.at("dim").get<int>();
    const TimeClass cls = time_class_from_string(j.at("time_class").get<std::string>());
    auto grid = j.at("time_grid").get<std::vector<double>>();
    auto check = [&](const CoeffTensor& a) {
      if (a.dim() != dim) throw IoError("coefficient file dimension disagrees with sidecar " + side.string());
      return a;
    };
    if (cls == TimeClass::static_element) {
      if (!grid.empty()) throw IoError("static element with a time grid in " + side.string());
      return GenFuncRep(check(read_coeff_csv(with_suffix(stem, ".csv"))));
    }
    std::vector<CoeffTensor> v, dv;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      v.push_back(check(read_coeff_csv(with_suffix(stem, "_t" + std::to_string(k) + ".csv"))));
      if (cls == TimeClass::c1)
        dv.push_back(check(read_coeff_csv(with_suffix(stem, "_dt" + std::to_string(k) + ".csv"))));
    }
    return GenFuncRep(cls, std::move(grid), std::move(v), std::move(dv));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad sidecar " + side.string() + ": " + e.what());
  }
}

}  // namespace hgf
