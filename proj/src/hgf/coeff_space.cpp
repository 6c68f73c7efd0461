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

#include "hgf/coeff_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "hgf/error.hpp"
#include "hgf/summation.hpp"
#include "hgf/tensor_ops.hpp"

namespace hgf {

namespace {

int max_of(std::span<const int> v) {
  int m = 0;
  for (int x : v) m = std::max(m, x);
  return m;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------- CoeffTensor

CoeffTensor::CoeffTensor(BasisSpec spec)
    : CoeffTensor(spec, std::vector<int>(static_cast<std::size_t>(std::max(spec.dim, 0)), spec.level)) {}

CoeffTensor::CoeffTensor(BasisSpec spec, std::vector<int> levels) : spec_(spec), levels_(std::move(levels)) {
  spec_.validate();
  if (levels_.size() != static_cast<std::size_t>(spec_.dim)) {
    throw InvalidInput("CoeffTensor: box rank does not match spec dimension");
  }
  for (int l : levels_) {
    if (l < 0) throw InvalidInput("CoeffTensor: box levels must be >= 0");
  }
  const int top = max_of(levels_);
  if (top > spec_.level) spec_ = spec_.with_level(top);
  spec_.level = top;
  std::size_t n = 1;
  for (int l : levels_) n *= static_cast<std::size_t>(l) + 1;
  values_.assign(n, 0.0);
}

CoeffTensor::CoeffTensor(BasisSpec spec, std::vector<int> levels, std::vector<double> values)
    : CoeffTensor(spec, std::move(levels)) {
  if (values.size() != values_.size()) throw InvalidInput("CoeffTensor: value count does not match box");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidInput("CoeffTensor: coefficients must be finite");
  }
  values_ = std::move(values);
}

CoeffTensor CoeffTensor::unit(const BasisSpec& spec, const MultiIndex& beta) {
  if (beta.dim() != spec.dim) throw InvalidInput("CoeffTensor::unit: dimension mismatch");
  CoeffTensor t(spec);
  t.at(beta) = 1.0;
  return t;
}

std::vector<std::size_t> CoeffTensor::shape() const {
  std::vector<std::size_t> s;
  s.reserve(levels_.size());
  for (int l : levels_) s.push_back(static_cast<std::size_t>(l) + 1);
  return s;
}

std::size_t CoeffTensor::offset(std::span<const int> beta) const {
  if (beta.size() != levels_.size()) throw InvalidInput("CoeffTensor: index rank mismatch");
  std::size_t off = 0;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (beta[i] < 0 || beta[i] > levels_[i]) throw InvalidInput("CoeffTensor: index outside stored box");
    off = off * (static_cast<std::size_t>(levels_[i]) + 1) + static_cast<std::size_t>(beta[i]);
  }
  return off;
}

MultiIndex CoeffTensor::index_of(std::size_t flat) const {
  std::vector<int> beta(levels_.size());
  for (std::size_t i = levels_.size(); i-- > 0;) {
    const std::size_t extent = static_cast<std::size_t>(levels_[i]) + 1;
    beta[i] = static_cast<int>(flat % extent);
    flat /= extent;
  }
  return MultiIndex(std::move(beta));
}

CoeffTensor CoeffTensor::resized(std::vector<int> levels) const {
  if (levels.size() != levels_.size()) throw InvalidInput("CoeffTensor::resized: rank mismatch");
  CoeffTensor out(spec_, levels);
  std::vector<int> beta(levels_.size());
  for (std::size_t f = 0; f < values_.size(); ++f) {
    std::size_t r = f;
    bool inside = true;
    for (std::size_t i = levels_.size(); i-- > 0;) {
      const std::size_t extent = static_cast<std::size_t>(levels_[i]) + 1;
      beta[i] = static_cast<int>(r % extent);
      r /= extent;
      inside = inside && beta[i] <= levels[i];
    }
    if (inside) out.values_[out.offset(beta)] = values_[f];
  }
  return out;
}

CoeffTensor CoeffTensor::resized(int level) const {
  return resized(std::vector<int>(levels_.size(), level));
}

CoeffTensor CoeffTensor::with_spec(const BasisSpec& spec) const {
  if (spec.dim != spec_.dim) throw InvalidInput("CoeffTensor::with_spec: dimension mismatch");
  return CoeffTensor(spec, levels_, values_);
}

CoeffTensor& CoeffTensor::operator+=(const CoeffTensor& other) {
  if (!same_box(other)) throw InvalidInput("CoeffTensor: box mismatch in addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

CoeffTensor& CoeffTensor::operator-=(const CoeffTensor& other) {
  if (!same_box(other)) throw InvalidInput("CoeffTensor: box mismatch in subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

CoeffTensor& CoeffTensor::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void CoeffTensor::axpy(double a, const CoeffTensor& x) {
  if (!same_box(x)) throw InvalidInput("CoeffTensor: box mismatch in axpy");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * x.values_[i];
}

// ------------------------------------------------------------------- NodeGrid

NodeGrid::NodeGrid(const BasisSpec& spec) : NodeGrid(spec, build_quadrature(spec)) {}

NodeGrid::NodeGrid(const BasisSpec& spec, std::shared_ptr<const QuadRule> rule)
    : spec_(spec), rule_(std::move(rule)) {}

std::size_t NodeGrid::size() const noexcept {
  std::size_t n = 1;
  for (int i = 0; i < spec_.dim; ++i) n *= rule_->nodes.size();
  return n;
}

std::vector<std::size_t> NodeGrid::shape() const {
  return std::vector<std::size_t>(static_cast<std::size_t>(spec_.dim), rule_->nodes.size());
}

void NodeGrid::point(std::size_t flat, std::span<double> x) const {
  const std::size_t m = rule_->nodes.size();
  for (std::size_t i = static_cast<std::size_t>(spec_.dim); i-- > 0;) {
    x[i] = rule_->nodes[flat % m];
    flat /= m;
  }
}

double NodeGrid::weight(std::size_t flat) const {
  const std::size_t m = rule_->nodes.size();
  double w = 1.0;
  for (int i = 0; i < spec_.dim; ++i) {
    w *= rule_->weights[flat % m];
    flat /= m;
  }
  return w;
}

CoeffTensor NodeGrid::analyze(std::span<const double> grid_values, std::vector<int> levels) const {
  if (grid_values.size() != size()) throw InvalidInput("analyze: grid value count mismatch");
  if (levels.size() != static_cast<std::size_t>(spec_.dim)) throw InvalidInput("analyze: box rank mismatch");
  for (int l : levels) {
    if (l < 0 || l > spec_.level) throw InvalidInput("analyze: requested level exceeds the rule's verified level");
  }
  for (double v : grid_values) {
    if (!std::isfinite(v)) throw InvalidInput("analyze: non-finite sample");
  }
  const std::size_t m = rule_->nodes.size();
  std::vector<std::size_t> shape = this->shape();
  std::vector<double> cur(grid_values.begin(), grid_values.end());
  std::vector<double> h;
  for (std::size_t axis = 0; axis < levels.size(); ++axis) {
    const std::size_t n = static_cast<std::size_t>(levels[axis]) + 1;
    detail::Matrix a(n, m);
    h.resize(n);
    for (std::size_t q = 0; q < m; ++q) {
      hermite_funcs(levels[axis], rule_->nodes[q], h);
      for (std::size_t k = 0; k < n; ++k) a(k, q) = rule_->weights[q] * h[k];
    }
    cur = detail::apply_axis(cur, shape, axis, a);
  }
  return CoeffTensor(spec_, std::move(levels), std::move(cur));
}

std::vector<double> NodeGrid::synthesize(const CoeffTensor& a) const {
  const std::vector<double> zero(static_cast<std::size_t>(spec_.dim), 0.0);
  return synthesize_shifted(a, zero);
}

std::vector<double> NodeGrid::synthesize_shifted(const CoeffTensor& a, std::span<const double> shift) const {
  if (a.dim() != spec_.dim || shift.size() != static_cast<std::size_t>(spec_.dim)) {
    throw InvalidInput("synthesize: dimension mismatch");
  }
  const std::size_t m = rule_->nodes.size();
  if (spec_.dim == 1) {
    const HermiteTable table(a.level(0));
    std::vector<double> out(m);
    for (std::size_t q = 0; q < m; ++q) out[q] = table.dot(rule_->nodes[q] - shift[0], a.values());
    return out;
  }
  std::vector<std::size_t> shape = a.shape();
  std::vector<double> cur(a.values().begin(), a.values().end());
  std::vector<double> h;
  for (std::size_t axis = 0; axis < shape.size(); ++axis) {
    const std::size_t n = shape[axis];
    detail::Matrix b(m, n);
    h.resize(n);
    for (std::size_t q = 0; q < m; ++q) {
      hermite_funcs(static_cast<int>(n) - 1, rule_->nodes[q] - shift[axis], h);
      for (std::size_t k = 0; k < n; ++k) b(q, k) = h[k];
    }
    cur = detail::apply_axis(cur, shape, axis, b);
  }
  return cur;
}

double NodeGrid::integrate(std::span<const double> u, std::span<const double> phi) const {
  if (u.size() != size() || phi.size() != size()) throw InvalidInput("integrate: grid size mismatch");
  CompensatedSum acc;
  for (std::size_t q = 0; q < u.size(); ++q) acc.add(weight(q) * u[q] * phi[q]);
  return acc.value();
}

std::vector<double> NodeGrid::sample(const Evaluable& f) const {
  std::vector<double> out(size());
  std::vector<double> x(static_cast<std::size_t>(spec_.dim));
  for (std::size_t q = 0; q < out.size(); ++q) {
    point(q, x);
    out[q] = f(x);
    if (!std::isfinite(out[q])) throw InvalidInput("analyze: non-finite sample");
  }
  return out;
}

// ----------------------------------------------------------------- operations

CoeffTensor analyze(const Evaluable& f, const BasisSpec& spec) {
  const NodeGrid grid(spec);
  return grid.analyze(grid.sample(f), std::vector<int>(static_cast<std::size_t>(spec.dim), spec.level));
}

double synthesize(const CoeffTensor& a, std::span<const double> x, const MultiIndex& level) {
  if (x.size() != static_cast<std::size_t>(a.dim()) || level.dim() != a.dim()) {
    throw InvalidInput("synthesize: dimension mismatch");
  }
  for (int i = 0; i < a.dim(); ++i) {
    if (level[i] > a.level(i)) throw InvalidInput("synthesize: level exceeds stored box " + level.str());
    if (!std::isfinite(x[static_cast<std::size_t>(i)])) throw InvalidInput("synthesize: non-finite point");
  }
  if (a.dim() == 1) {
    const HermiteTable table(level[0]);
    return table.dot(x[0], a.values().first(static_cast<std::size_t>(level[0]) + 1));
  }
  // Contract one axis at a time with the point's basis values.
  std::vector<std::size_t> shape = a.shape();
  std::vector<double> cur(a.values().begin(), a.values().end());
  std::vector<double> h;
  for (std::size_t axis = 0; axis < shape.size(); ++axis) {
    const std::size_t n = shape[axis];
    detail::Matrix row(1, n);
    h.resize(n);
    hermite_funcs(static_cast<int>(n) - 1, x[axis], h);
    for (std::size_t k = 0; k <= static_cast<std::size_t>(level[static_cast<int>(axis)]); ++k) row(0, k) = h[k];
    cur = detail::apply_axis(cur, shape, axis, row);
  }
  return cur[0];
}

double synthesize(const CoeffTensor& a, std::span<const double> x) {
  return synthesize(a, x, MultiIndex(std::vector<int>(a.levels().begin(), a.levels().end())));
}

double seminorm(const CoeffTensor& a, int n) {
  if (n < 0) throw InvalidInput("seminorm: n must be >= 0");
  CompensatedSum acc;
  const double d = a.dim();
  for (std::size_t f = 0; f < a.size(); ++f) {
    const double v = a.values()[f];
    if (v == 0.0) continue;
    const double t = std::pow(2.0 * a.index_of(f).order() + d, n) * v;
    acc.add(t * t);
  }
  return std::sqrt(acc.value());
}

DualNormReport dual_norm(const CoeffTensor& b, int n) {
  if (n < 1) throw InvalidInput("dual_norm: n must be >= 1");
  int top = 0;
  for (int l : b.levels()) top = std::max(top, l);
  std::vector<CompensatedSum> by_shell(static_cast<std::size_t>(top) + 1);
  const double d = b.dim();
  for (std::size_t f = 0; f < b.size(); ++f) {
    const double v = b.values()[f];
    if (v == 0.0) continue;
    const MultiIndex beta = b.index_of(f);
    int shell = 0;
    for (int e : beta.entries()) shell = std::max(shell, e);
    const double t = std::pow(2.0 * beta.order() + d, -n) * v;
    by_shell[static_cast<std::size_t>(shell)].add(t * t);
  }
  DualNormReport report;
  CompensatedSum running;
  for (auto& s : by_shell) {
    running.add(s.value());
    report.partial_sums.push_back(std::sqrt(running.value()));
  }
  report.value = report.partial_sums.empty() ? 0.0 : report.partial_sums.back();
  return report;
}

double pairing(const CoeffTensor& b, const CoeffTensor& a) {
  if (!b.same_box(a)) throw InvalidInput("pairing: coefficient boxes differ");
  CompensatedSum acc;
  for (std::size_t f = 0; f < a.size(); ++f) acc.add(b.values()[f] * a.values()[f]);
  return acc.value();
}

GrowthProfile growth_order(const CoeffTensor& b, double plateau_factor) {
  if (b.size() == 0) throw InvalidInput("growth_order: empty tensor");
  int max_order = 0;
  for (int l : b.levels()) max_order += l;
  const double d = b.dim();
  bool all_zero = true;
  for (double v : b.values()) all_zero = all_zero && v == 0.0;
  if (all_zero) return {};

  constexpr int kMaxM = 64;
  GrowthProfile best;
  for (int m = 0; m <= kMaxM; ++m) {
    double c_all = 0.0, c_inner = 0.0, c_outer = 0.0;
    for (std::size_t f = 0; f < b.size(); ++f) {
      const int order = b.index_of(f).order();
      const double w = std::abs(b.values()[f]) * std::pow(2.0 * order + d, -m);
      c_all = std::max(c_all, w);
      if (2 * order <= max_order) {
        c_inner = std::max(c_inner, w);
      } else {
        c_outer = std::max(c_outer, w);
      }
    }
    best = {c_all, m, c_inner > 0.0 ? c_outer / c_inner : INFINITY};
    if (max_order == 0 || c_outer <= plateau_factor * c_inner) break;
  }
  return best;
}

// ------------------------------------------------------------------------ CSV

std::string coeff_csv_string(const CoeffTensor& a) {
  std::string out;
  for (int i = 0; i < a.dim(); ++i) out += "beta_" + std::to_string(i + 1) + ",";
  out += "value\n";
  for (std::size_t f = 0; f < a.size(); ++f) {
    const MultiIndex beta = a.index_of(f);
    for (int e : beta.entries()) out += std::to_string(e) + ",";
    out += fmt_double(a.values()[f]) + "\n";
  }
  return out;
}

void write_coeff_csv(const CoeffTensor& a, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << coeff_csv_string(a);
  if (!os) throw IoError("failed writing " + path.string());
}

CoeffTensor parse_coeff_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw InvalidInput("coefficient CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2 || header.back() != "value") throw InvalidInput("coefficient CSV: header must end in 'value'");
  const int dim = static_cast<int>(header.size()) - 1;
  for (int i = 0; i < dim; ++i) {
    if (header[static_cast<std::size_t>(i)] != "beta_" + std::to_string(i + 1)) {
      throw InvalidInput("coefficient CSV: expected column beta_" + std::to_string(i + 1));
    }
  }
  std::map<std::vector<int>, double> entries;
  std::vector<int> top(static_cast<std::size_t>(dim), 0);
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) {
      throw InvalidInput("coefficient CSV: wrong column count on line " + std::to_string(line_no));
    }
    std::vector<int> beta(static_cast<std::size_t>(dim));
    try {
      for (int i = 0; i < dim; ++i) {
        std::size_t used = 0;
        beta[static_cast<std::size_t>(i)] = std::stoi(cells[static_cast<std::size_t>(i)], &used);
        if (used != cells[static_cast<std::size_t>(i)].size()) throw std::invalid_argument("trailing");
      }
    } catch (const std::exception&) {
      throw InvalidInput("coefficient CSV: bad index on line " + std::to_string(line_no));
    }
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(cells.back(), &used);
      if (used != cells.back().size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InvalidInput("coefficient CSV: bad value on line " + std::to_string(line_no));
    }
    if (!std::isfinite(v)) throw InvalidInput("coefficient CSV: non-finite value on line " + std::to_string(line_no));
    for (int i = 0; i < dim; ++i) {
      if (beta[static_cast<std::size_t>(i)] < 0) {
        throw InvalidInput("coefficient CSV: negative index on line " + std::to_string(line_no));
      }
      top[static_cast<std::size_t>(i)] = std::max(top[static_cast<std::size_t>(i)], beta[static_cast<std::size_t>(i)]);
    }
    if (!entries.emplace(beta, v).second) {
      throw InvalidInput("coefficient CSV: duplicate index on line " + std::to_string(line_no));
    }
  }
  if (entries.empty()) throw InvalidInput("coefficient CSV: no rows");
  int level = 0;
  for (int t : top) level = std::max(level, t);
  CoeffTensor out(BasisSpec::make(dim, level), top);
  for (const auto& [beta, v] : entries) out.values()[out.offset(beta)] = v;
  return out;
}

CoeffTensor read_coeff_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_coeff_csv(ss.str());
}

}  // namespace hgf
