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

// Named test functions usable from configs. All act on R^d; "x_gauss" and
// "cos_gauss" use the first coordinate for the non-Gaussian factor.
//   gauss      exp(-|x|^2 / 2)
//   gauss4     exp(-|x|^2 / 4)
//   x_gauss    x_1 exp(-|x|^2 / 2)
//   cos_gauss  cos(x_1) exp(-|x|^2 / 4)
//   plateau    prod_i (erf((x_i + 16) / 2) - erf((x_i - 16) / 2)) / 2

#include <string>
#include <vector>

#include "hgf/gen_func.hpp"

namespace hgf {

Evaluable named_function(const std::string& name);
std::vector<std::string> function_names();
TestFunction named_test(const std::string& name);

}  // namespace hgf
