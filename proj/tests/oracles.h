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

#ifndef GRAPHBANDIT_TESTS_ORACLES_H_
#define GRAPHBANDIT_TESTS_ORACLES_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "graphbandit/graph.h"

namespace graphbandit::testing {

// Size of the largest vertex mask accepted by `admissible`.
inline std::size_t LargestSubset(
    std::size_t k, const std::function<bool(std::uint32_t)>& admissible) {
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size > best && admissible(mask)) best = size;
  }
  return best;
}

inline bool PairwiseFree(const FeedbackGraph& g, std::uint32_t mask,
                         bool mutual_only) {
  const std::size_t k = g.num_arms();
  for (Arm i = 0; i < k; ++i) {
    if (!(mask >> i & 1u)) continue;
    for (Arm j = i + 1; j < k; ++j) {
      if (!(mask >> j & 1u)) continue;
      const bool joined = mutual_only ? g.HasMutualEdge(i, j)
                                      : g.HasEdge(i, j) || g.HasEdge(j, i);
      if (joined) return false;
    }
  }
  return true;
}

inline std::size_t NaiveAlpha(const FeedbackGraph& g) {
  return LargestSubset(g.num_arms(), [&](std::uint32_t m) {
    return PairwiseFree(g, m, false);
  });
}

inline std::size_t NaiveAlphaStrong(const FeedbackGraph& g) {
  return LargestSubset(g.num_arms(), [&](std::uint32_t m) {
    return PairwiseFree(g, m, true);
  });
}

// Depth-first search with colors over the induced subgraph.
inline bool InducedAcyclic(const FeedbackGraph& g, std::uint32_t mask) {
  const std::size_t k = g.num_arms();
  std::vector<int> color(k, 0);
  std::function<bool(Arm)> visit = [&](Arm u) {
    color[u] = 1;
    for (Arm v : g.out_neighbors(u)) {
      if (v == u || !(mask >> v & 1u)) continue;
      if (color[v] == 1) return false;
      if (color[v] == 0 && !visit(v)) return false;
    }
    color[u] = 2;
    return true;
  };
  for (Arm u = 0; u < k; ++u) {
    if ((mask >> u & 1u) && color[u] == 0 && !visit(u)) return false;
  }
  return true;
}

inline std::size_t NaiveMas(const FeedbackGraph& g) {
  return LargestSubset(g.num_arms(),
                       [&](std::uint32_t m) { return InducedAcyclic(g, m); });
}

inline std::vector<double> NaiveObservationProbabilities(
    const FeedbackGraph& g, const std::vector<double>& p) {
  const std::size_t k = g.num_arms();
  std::vector<double> out(k, 0.0);
  for (Arm j = 0; j < k; ++j) {
    for (Arm i = 0; i < k; ++i) {
      if (g.HasEdge(j, i)) out[i] += p[j];
    }
  }
  return out;
}

}  // namespace graphbandit::testing

#endif  // GRAPHBANDIT_TESTS_ORACLES_H_
