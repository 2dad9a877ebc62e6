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

#ifndef GRAPHBANDIT_GRAPH_H_
#define GRAPHBANDIT_GRAPH_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace graphbandit {

using Arm = std::size_t;
using Edge = std::pair<Arm, Arm>;

// Raised by the graph loaders. line() is 1-based, 0 when not applicable
// (JSON input).
class GraphParseError : public std::runtime_error {
 public:
  GraphParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Raised when an exhaustive oracle is asked for a graph above its size cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Directed feedback graph on K arms. Every arm carries a self-loop; playing
// arm i reveals the losses of out_neighbors(i). Immutable after
// construction.
class FeedbackGraph {
 public:
  // Builds the graph from a list of directed edges; self-loops are added
  // for every arm. Throws std::domain_error on K < 2 or out-of-range
  // indices.
  FeedbackGraph(std::size_t num_arms, std::span<const Edge> edges);

  static FeedbackGraph Bandit(std::size_t num_arms);
  static FeedbackGraph Complete(std::size_t num_arms);

  std::size_t num_arms() const { return num_arms_; }
  const std::vector<Arm>& out_neighbors(Arm i) const { return out_[i]; }
  const std::vector<Arm>& in_neighbors(Arm i) const { return in_[i]; }
  bool HasEdge(Arm from, Arm to) const {
    return adjacency_[from * num_arms_ + to] != 0;
  }
  bool HasMutualEdge(Arm a, Arm b) const {
    return HasEdge(a, b) && HasEdge(b, a);
  }

  // All edges, self-loops included, in (from, to) lexicographic order.
  std::vector<Edge> Edges() const;

  // True when every edge has its reverse.
  bool IsUndirected() const;

  bool operator==(const FeedbackGraph& other) const {
    return num_arms_ == other.num_arms_ && adjacency_ == other.adjacency_;
  }

 private:
  std::size_t num_arms_;
  std::vector<std::uint8_t> adjacency_;
  std::vector<std::vector<Arm>> out_;
  std::vector<std::vector<Arm>> in_;
};

struct LoadOptions {
  // Reject input that does not list every self-loop explicitly instead of
  // adding the missing ones.
  bool strict_self_loops = false;
};

// Reads either the edge-list format ("K" on the first line, then "u v" per
// line; blank lines and '#' comments ignored) or the JSON object
// {"K": int, "edges": [[u, v], ...]}. The format is detected from the first
// non-blank character.
FeedbackGraph LoadGraph(std::istream& in, const LoadOptions& options = {});
FeedbackGraph LoadGraphFile(const std::filesystem::path& path,
                            const LoadOptions& options = {});
FeedbackGraph GraphFromJson(const nlohmann::json& j,
                            const LoadOptions& options = {});

nlohmann::json GraphToJson(const FeedbackGraph& g);
// Edge-list text with one line per edge, self-loops included.
std::string SerializeEdgeList(const FeedbackGraph& g);

// The undirected subgraph keeping {i, j} only when both (i, j) and (j, i)
// are edges. Self-loops are kept.
FeedbackGraph StrongSubgraph(const FeedbackGraph& g);

inline constexpr std::size_t kIndependenceCap = 20;
inline constexpr std::size_t kMasCap = 10;

// Exact maximum independent set by branch and bound. Self-loops are
// ignored. With ignore_directions, an edge in either direction makes a pair
// dependent; without it only mutual pairs are dependent, which yields a
// maximum strongly independent set. Among maximum sets the first in
// lexicographic order (smaller indices included first) is returned.
std::vector<Arm> MaximumIndependentSet(const FeedbackGraph& g,
                                       bool ignore_directions = true,
                                       std::size_t cap = kIndependenceCap);

std::size_t IndependenceNumber(const FeedbackGraph& g,
                               bool ignore_directions = true,
                               std::size_t cap = kIndependenceCap);

// Independence number of StrongSubgraph(g).
std::size_t StrongIndependenceNumber(const FeedbackGraph& g,
                                     std::size_t cap = kIndependenceCap);

// Size of the largest vertex subset whose induced subgraph has no directed
// cycle (self-loops excluded from the cycle check).
std::size_t MaximumAcyclicSubgraph(const FeedbackGraph& g,
                                   std::size_t cap = kMasCap);

// Every arm lies in the out-neighborhood of some member of `set`.
bool IsDominating(const FeedbackGraph& g, std::span<const Arm> set);
// No two distinct members are joined by edges in both directions.
bool IsStronglyIndependent(const FeedbackGraph& g, std::span<const Arm> set);
// No two distinct members are joined by an edge in either direction.
bool IsIndependent(const FeedbackGraph& g, std::span<const Arm> set);

struct GraphStats {
  std::size_t alpha = 0;
  std::size_t alpha_strong = 0;
  std::optional<std::size_t> mas;
  bool is_undirected = false;
};

// mas is only computed when K <= mas_cap.
GraphStats ComputeGraphStats(const FeedbackGraph& g,
                             std::size_t independence_cap = kIndependenceCap,
                             std::size_t mas_cap = kMasCap);

nlohmann::json GraphStatsToJson(const GraphStats& stats);

}  // namespace graphbandit

#endif  // GRAPHBANDIT_GRAPH_H_
