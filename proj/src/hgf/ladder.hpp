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

#include "hgf/coeff_space.hpp"

namespace hgf {

// Coefficient images of d/dx_axis and multiplication by x_axis, from
//   h_n' = (sqrt(n) h_{n-1} - sqrt(n+1) h_{n+1}) / 2
//   x h_n = sqrt(n+1) h_{n+1} + sqrt(n) h_{n-1}
// Both raise the box along `axis` by one.

CoeffTensor ladder_derivative(const CoeffTensor& a, int axis);
CoeffTensor ladder_multiply_x(const CoeffTensor& a, int axis);

}  // namespace hgf
