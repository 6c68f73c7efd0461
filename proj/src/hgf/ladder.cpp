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

#include "hgf/ladder.hpp"

#include <cmath>
#include <vector>

#include "hgf/error.hpp"

namespace hgf {

namespace {

// b_m = lower * sqrt(m) a_{m-1} + upper * sqrt(m+1) a_{m+1} along axis.
CoeffTensor ladder(const CoeffTensor& a, int axis, double lower, double upper, const char* what) {
  if (axis < 0 || axis >= a.dim()) throw InvalidInput(std::string(what) + ": axis out of range");
  std::vector<int> levels(a.levels().begin(), a.levels().end());
  const int n_in = levels[static_cast<std::size_t>(axis)];
  levels[static_cast<std::size_t>(axis)] = n_in + 1;
  CoeffTensor out(a.spec(), levels);

  const std::vector<std::size_t> in_shape = a.shape();
  std::size_t outer = 1;
  for (int k = 0; k < axis; ++k) outer *= in_shape[static_cast<std::size_t>(k)];
  std::size_t inner = 1;
  for (std::size_t k = static_cast<std::size_t>(axis) + 1; k < in_shape.size(); ++k) inner *= in_shape[k];
  const std::size_t len_in = static_cast<std::size_t>(n_in) + 1;
  const std::size_t len_out = len_in + 1;

  auto src = a.values();
  auto dst = out.values();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t m = 0; m < len_out; ++m) {
      double* d = dst.data() + (o * len_out + m) * inner;
      if (m >= 1) {
        const double c = lower * std::sqrt(static_cast<double>(m));
        const double* s = src.data() + (o * len_in + (m - 1)) * inner;
        for (std::size_t r = 0; r < inner; ++r) d[r] += c * s[r];
      }
      if (m + 1 < len_in) {
        const double c = upper * std::sqrt(static_cast<double>(m + 1));
        const double* s = src.data() + (o * len_in + (m + 1)) * inner;
        for (std::size_t r = 0; r < inner; ++r) d[r] += c * s[r];
      }
    }
  }
  return out;
}

}  // namespace

CoeffTensor ladder_derivative(const CoeffTensor& a, int axis) {
  return ladder(a, axis, -0.5, 0.5, "ladder_derivative");
}

CoeffTensor ladder_multiply_x(const CoeffTensor& a, int axis) {
  return ladder(a, axis, 1.0, 1.0, "ladder_multiply_x");
}

}  // namespace hgf
