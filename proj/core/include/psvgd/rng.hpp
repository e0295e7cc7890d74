// Copyright 2026 The psvgd Authors. All Rights Reserved.
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

#include <cstdint>
#include <random>

#include "psvgd/types.hpp"

namespace psvgd {

using Engine = std::mt19937_64;

// Independent purposes draw from disjoint branches of the seed tree.
enum class StreamDomain : std::uint64_t {
  kPriorSample = 0x5052494f52ULL,
  kModelData = 0x444154414dULL,
  kMarkovChain = 0x4d434d43ULL,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for stream `index` under `parent`. Pure function of its inputs,
// so the stream for particle n does not depend on how particles are split
// across workers.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(parent) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline Engine make_engine(std::uint64_t master, StreamDomain domain, std::uint64_t index) {
  return Engine(derive_seed(derive_seed(master, static_cast<std::uint64_t>(domain)), index));
}

inline Vector standard_normal_vector(Engine& engine, Index dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(dim);
  for (Index i = 0; i < dim; ++i) z[i] = normal(engine);
  return z;
}

}  // namespace psvgd
