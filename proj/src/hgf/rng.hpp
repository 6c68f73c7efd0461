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

// Reproducible random streams. Each (seed, stream index, purpose) triple maps
// through splitmix64 to an independent mt19937_64 state; normals come from a
// hand-written Box-Muller transform so the sequence is identical on every
// platform (std::normal_distribution is implementation-defined).

#include <cstdint>
#include <random>

namespace hgf {

enum class StreamPurpose : std::uint64_t {
  brownian = 0x42726f776e69616eULL,
  heat = 0x4865617448656174ULL,
  source = 0x536f757263655f5fULL,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, StreamPurpose purpose) noexcept;

class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t index, StreamPurpose purpose);

  double uniform() noexcept;  // in (0, 1)
  double normal() noexcept;

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hgf
