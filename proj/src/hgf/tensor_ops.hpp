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

// Dense tensors on tensor-product index sets, row-major (last axis fastest),
// and the one contraction everything is built from: applying a matrix along
// a single axis.

#include <cstddef>
#include <span>
#include <vector>

namespace hgf::detail {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;  // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

inline std::size_t shape_size(std::span<const std::size_t> shape) {
  std::size_t n = 1;
  for (std::size_t s : shape) n *= s;
  return n;
}

// out[..., i, ...] = sum_j m(i, j) in[..., j, ...] along `axis`.
inline std::vector<double> apply_axis(std::span<const double> in, std::vector<std::size_t>& shape,
                                      std::size_t axis, const Matrix& m) {
  std::size_t outer = 1;
  for (std::size_t k = 0; k < axis; ++k) outer *= shape[k];
  std::size_t inner = 1;
  for (std::size_t k = axis + 1; k < shape.size(); ++k) inner *= shape[k];
  const std::size_t len_in = shape[axis];
  const std::size_t len_out = m.rows;
  std::vector<double> out(outer * len_out * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    const double* src = in.data() + o * len_in * inner;
    double* dst = out.data() + o * len_out * inner;
    for (std::size_t i = 0; i < len_out; ++i) {
      const double* row = m.a.data() + i * m.cols;
      double* d = dst + i * inner;
      for (std::size_t j = 0; j < len_in; ++j) {
        const double c = row[j];
        if (c == 0.0) continue;
        const double* s = src + j * inner;
        for (std::size_t r = 0; r < inner; ++r) d[r] += c * s[r];
      }
    }
  }
  shape[axis] = len_out;
  return out;
}

}  // namespace hgf::detail
