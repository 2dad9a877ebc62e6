// Copyright 2026 The graphbandit Authors.
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

#ifndef GRAPHBANDIT_RNG_H_
#define GRAPHBANDIT_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace graphbandit {

// SplitMix64 finalizer. A bijection on 64-bit words with good avalanche.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives the seed of an independent stream from a master seed and a path
// of indices, e.g. DeriveSeed(master, {replicate, learner}). Streams depend
// only on (master, path), never on scheduling order.
std::uint64_t DeriveSeed(std::uint64_t master,
                         std::initializer_list<std::uint64_t> path);

// Maps 64 random bits to a double in [0, 1) using the top 53 bits.
constexpr double ToUnitInterval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Counter-based uniform draw: a pure function of (key, counter). Used where
// random access by round index is required (stochastic losses, oblivious
// sequences).
inline double UniformAt(std::uint64_t key, std::uint64_t counter) {
  return ToUnitInterval(Mix64(key ^ Mix64(counter)));
}

// Sequential generator owned by a single learner or run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextBits() { return engine_(); }
  double Uniform() { return ToUnitInterval(engine_()); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace graphbandit

#endif  // GRAPHBANDIT_RNG_H_
