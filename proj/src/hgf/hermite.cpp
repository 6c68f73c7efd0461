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

#include "hgf/hermite.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hgf/error.hpp"

namespace hgf {

namespace {

const double kLogH0Norm = -0.25 * std::log(2.0 * std::numbers::pi);
const double kH0Norm = std::exp(kLogH0Norm);  // (2 pi)^{-1/4}

constexpr double kRescaleAt = 1e100;
constexpr double kRescaleBy = 1e-100;
const double kRescaleLog = 100.0 * std::log(10.0);

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw InvalidInput(std::string(what) + ": argument must be finite");
  }
}

void require_order(int n, const char* what) {
  if (n < 0) throw InvalidInput(std::string(what) + ": order must be >= 0");
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw InvalidInput("MultiIndex: entries must be nonnegative");
    order_ += e;
  }
}

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(std::vector<int>(entries)) {}

bool MultiIndex::leq(const MultiIndex& other) const {
  if (other.dim() != dim()) throw InvalidInput("MultiIndex: dimension mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] > other.entries_[i]) return false;
  }
  return true;
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ',';
    os << entries_[i];
  }
  os << ')';
  return os.str();
}

double hermite_poly(int n, double x) {
  require_order(n, "hermite_poly");
  require_finite(x, "hermite_poly");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_func(int n, double x) {
  require_order(n, "hermite_func");
  require_finite(x, "hermite_func");
  double log_scale = kLogH0Norm - 0.25 * x * x;
  if (n == 0) return std::exp(log_scale);
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                        std::sqrt(static_cast<double>(k + 1));
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleAt) {
      prev *= kRescaleBy;
      cur *= kRescaleBy;
      log_scale += kRescaleLog;
    }
  }
  if (cur == 0.0) return 0.0;
  return std::copysign(std::exp(std::log(std::abs(cur)) + log_scale), cur);
}

void hermite_funcs(int nmax, double x, std::span<double> out) {
  require_order(nmax, "hermite_funcs");
  require_finite(x, "hermite_funcs");
  if (out.size() < static_cast<std::size_t>(nmax) + 1) {
    throw InvalidInput("hermite_funcs: output span too small");
  }
  out[0] = kH0Norm * std::exp(-0.25 * x * x);
  if (nmax == 0) return;
  out[1] = x * out[0];
  for (int k = 1; k < nmax; ++k) {
    out[k + 1] = (x * out[k] - std::sqrt(static_cast<double>(k)) * out[k - 1]) /
                 std::sqrt(static_cast<double>(k + 1));
  }
}

void hermite_func_derivs(int nmax, double x, std::span<double> out) {
  require_order(nmax, "hermite_func_derivs");
  if (out.size() < static_cast<std::size_t>(nmax) + 1) {
    throw InvalidInput("hermite_func_derivs: output span too small");
  }
  std::vector<double> h(static_cast<std::size_t>(nmax) + 2);
  hermite_funcs(nmax + 1, x, h);
  for (int n = 0; n <= nmax; ++n) {
    const double lower = n > 0 ? std::sqrt(static_cast<double>(n)) * h[n - 1] : 0.0;
    out[n] = 0.5 * (lower - std::sqrt(static_cast<double>(n + 1)) * h[n + 1]);
  }
}

double hermite_sum_squares(int count, double x) {
  require_finite(x, "hermite_sum_squares");
  if (count <= 0) return 0.0;
  double log_scale = kLogH0Norm - 0.25 * x * x;
  double prev = 0.0;
  double cur = 1.0;
  double sum = 1.0;
  for (int k = 0; k + 1 < count; ++k) {
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                        std::sqrt(static_cast<double>(k + 1));
    prev = cur;
    cur = next;
    sum += cur * cur;
    if (std::abs(cur) > kRescaleAt) {
      prev *= kRescaleBy;
      cur *= kRescaleBy;
      sum *= kRescaleBy * kRescaleBy;
      log_scale += kRescaleLog;
    }
  }
  return std::exp(std::log(sum) + 2.0 * log_scale);
}

double hermite_tensor(const MultiIndex& beta, std::span<const double> x) {
  if (static_cast<std::size_t>(beta.dim()) != x.size()) {
    throw InvalidInput("hermite_tensor: dimension mismatch between index and point");
  }
  double v = 1.0;
  for (int i = 0; i < beta.dim(); ++i) v *= hermite_func(beta[i], x[static_cast<std::size_t>(i)]);
  return v;
}

HermiteTable::HermiteTable(int nmax)
    : nmax_(nmax), up_(static_cast<std::size_t>(nmax) + 1), down_(static_cast<std::size_t>(nmax) + 1) {
  require_order(nmax, "HermiteTable");
  for (int n = 0; n <= nmax; ++n) {
    up_[n] = 1.0 / std::sqrt(static_cast<double>(n + 1));
    down_[n] = std::sqrt(static_cast<double>(n) / static_cast<double>(n + 1));
  }
}

void HermiteTable::eval(double x, std::span<double> out) const {
  const std::size_t count = out.size();
  if (count == 0) return;
  if (count > static_cast<std::size_t>(nmax_) + 1) throw InvalidInput("HermiteTable: order exceeds table");
  out[0] = kH0Norm * std::exp(-0.25 * x * x);
  if (count == 1) return;
  out[1] = x * out[0];
  for (std::size_t n = 1; n + 1 < count; ++n) {
    out[n + 1] = x * up_[n] * out[n] - down_[n] * out[n - 1];
  }
}

double HermiteTable::dot(double x, std::span<const double> c) const {
  const std::size_t count = c.size();
  if (count == 0) return 0.0;
  if (count > static_cast<std::size_t>(nmax_) + 1) throw InvalidInput("HermiteTable: order exceeds table");
  double prev = kH0Norm * std::exp(-0.25 * x * x);
  double acc = c[0] * prev;
  if (count == 1) return acc;
  double cur = x * prev;
  acc += c[1] * cur;
  for (std::size_t n = 1; n + 1 < count; ++n) {
    const double next = x * up_[n] * cur - down_[n] * prev;
    prev = cur;
    cur = next;
    acc += c[n + 1] * cur;
  }
  return acc;
}

}  // namespace hgf
