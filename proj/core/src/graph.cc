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

#include "graphbandit/graph.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>

#include <fmt/format.h>

namespace graphbandit {
namespace {

using Mask = std::uint64_t;

constexpr Mask Bit(Arm i) { return Mask{1} << i; }

void CheckCap(const FeedbackGraph& g, std::size_t cap, const char* what) {
  if (g.num_arms() > cap || g.num_arms() > 63) {
    throw CapacityError(fmt::format(
        "{}: K = {} exceeds the exhaustive-search cap of {}; supply the "
        "value manually (e.g. lambda / alpha_tilde in the learner config)",
        what, g.num_arms(), std::min<std::size_t>(cap, 63)));
  }
}

// conflict[v] has bit u set when u and v may not both be in the set.
std::vector<Mask> ConflictMasks(const FeedbackGraph& g,
                                bool ignore_directions) {
  const std::size_t k = g.num_arms();
  std::vector<Mask> conflict(k, 0);
  for (Arm u = 0; u < k; ++u) {
    for (Arm v = 0; v < k; ++v) {
      if (u == v) continue;
      const bool dependent = ignore_directions
                                 ? (g.HasEdge(u, v) || g.HasEdge(v, u))
                                 : g.HasMutualEdge(u, v);
      if (dependent) conflict[u] |= Bit(v);
    }
  }
  return conflict;
}

class IndependentSetSearch {
 public:
  explicit IndependentSetSearch(std::vector<Mask> conflict)
      : conflict_(std::move(conflict)) {}

  Mask Run(Mask all) {
    Search(all, 0, 0);
    return best_set_;
  }

 private:
  void Search(Mask candidates, Mask current, int size) {
    if (candidates == 0) {
      if (size > best_size_) {
        best_size_ = size;
        best_set_ = current;
      }
      return;
    }
    if (size + std::popcount(candidates) <= best_size_) return;
    const Arm v = static_cast<Arm>(std::countr_zero(candidates));
    const Mask rest = candidates & ~Bit(v);
    Search(rest & ~conflict_[v], current | Bit(v), size + 1);
    Search(rest, current, size);
  }

  std::vector<Mask> conflict_;
  int best_size_ = -1;
  Mask best_set_ = 0;
};

bool InducedSubgraphIsAcyclic(const std::vector<Mask>& successors,
                              Mask vertices) {
  // Kahn's algorithm restricted to `vertices`.
  Mask remaining = vertices;
  bool progressed = true;
  while (remaining != 0 && progressed) {
    progressed = false;
    for (Mask scan = remaining; scan != 0; scan &= scan - 1) {
      const Arm v = static_cast<Arm>(std::countr_zero(scan));
      // v is a sink among the remaining vertices: peel it off.
      if ((successors[v] & remaining) == 0) {
        remaining &= ~Bit(v);
        progressed = true;
      }
    }
  }
  return remaining == 0;
}

FeedbackGraph BuildChecked(std::size_t num_arms, const std::vector<Edge>& edges,
                           const LoadOptions& options) {
  if (options.strict_self_loops) {
    std::vector<bool> has_loop(num_arms, false);
    for (const auto& [u, v] : edges) {
      if (u == v && u < num_arms) has_loop[u] = true;
    }
    for (Arm i = 0; i < num_arms; ++i) {
      if (!has_loop[i]) {
        throw std::domain_error(
            fmt::format("strict mode: arm {} has no self-loop", i));
      }
    }
  }
  return FeedbackGraph(num_arms, edges);
}

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

FeedbackGraph LoadEdgeList(std::istream& in, const LoadOptions& options) {
  std::optional<long long> num_arms;
  std::vector<Edge> edges;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = Trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (!num_arms) {
      long long k = 0;
      if (!(fields >> k) || !(fields >> std::ws).eof()) {
        throw GraphParseError(
            fmt::format("line {}: expected the number of arms", line_no),
            line_no);
      }
      if (k < 2) {
        throw std::domain_error(
            fmt::format("line {}: need K >= 2, got {}", line_no, k));
      }
      num_arms = k;
      continue;
    }
    long long u = 0;
    long long v = 0;
    if (!(fields >> u >> v) || !(fields >> std::ws).eof()) {
      throw GraphParseError(
          fmt::format("line {}: expected \"u v\", got \"{}\"", line_no, line),
          line_no);
    }
    if (u < 0 || v < 0 || u >= *num_arms || v >= *num_arms) {
      throw std::domain_error(fmt::format(
          "line {}: edge ({}, {}) out of range for K = {}", line_no, u, v,
          *num_arms));
    }
    edges.emplace_back(static_cast<Arm>(u), static_cast<Arm>(v));
  }
  if (!num_arms) {
    throw GraphParseError("empty graph description", line_no);
  }
  return BuildChecked(static_cast<std::size_t>(*num_arms), edges, options);
}

}  // namespace

FeedbackGraph::FeedbackGraph(std::size_t num_arms, std::span<const Edge> edges)
    : num_arms_(num_arms),
      adjacency_(num_arms * num_arms, 0),
      out_(num_arms),
      in_(num_arms) {
  if (num_arms < 2) {
    throw std::domain_error(fmt::format("need K >= 2 arms, got {}", num_arms));
  }
  for (Arm i = 0; i < num_arms; ++i) adjacency_[i * num_arms + i] = 1;
  for (const auto& [u, v] : edges) {
    if (u >= num_arms || v >= num_arms) {
      throw std::domain_error(fmt::format(
          "edge ({}, {}) out of range for K = {}", u, v, num_arms));
    }
    adjacency_[u * num_arms + v] = 1;
  }
  for (Arm u = 0; u < num_arms; ++u) {
    for (Arm v = 0; v < num_arms; ++v) {
      if (HasEdge(u, v)) {
        out_[u].push_back(v);
        in_[v].push_back(u);
      }
    }
  }
}

FeedbackGraph FeedbackGraph::Bandit(std::size_t num_arms) {
  return FeedbackGraph(num_arms, {});
}

FeedbackGraph FeedbackGraph::Complete(std::size_t num_arms) {
  std::vector<Edge> edges;
  edges.reserve(num_arms * num_arms);
  for (Arm u = 0; u < num_arms; ++u) {
    for (Arm v = 0; v < num_arms; ++v) edges.emplace_back(u, v);
  }
  return FeedbackGraph(num_arms, edges);
}

std::vector<Edge> FeedbackGraph::Edges() const {
  std::vector<Edge> edges;
  for (Arm u = 0; u < num_arms_; ++u) {
    for (Arm v : out_[u]) edges.emplace_back(u, v);
  }
  return edges;
}

bool FeedbackGraph::IsUndirected() const {
  for (Arm u = 0; u < num_arms_; ++u) {
    for (Arm v : out_[u]) {
      if (!HasEdge(v, u)) return false;
    }
  }
  return true;
}

FeedbackGraph LoadGraph(std::istream& in, const LoadOptions& options) {
  in >> std::ws;
  if (in.peek() == '{') {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw GraphParseError(fmt::format("invalid graph JSON: {}", e.what()), 0);
    }
    return GraphFromJson(j, options);
  }
  return LoadEdgeList(in, options);
}

FeedbackGraph LoadGraphFile(const std::filesystem::path& path,
                            const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(
        fmt::format("cannot open graph file {}", path.string()));
  }
  return LoadGraph(in, options);
}

FeedbackGraph GraphFromJson(const nlohmann::json& j,
                            const LoadOptions& options) {
  if (!j.is_object() || !j.contains("K") || !j["K"].is_number_integer()) {
    throw GraphParseError("graph JSON needs an integer field \"K\"", 0);
  }
  const auto k = j["K"].get<long long>();
  if (k < 2) throw std::domain_error(fmt::format("need K >= 2, got {}", k));
  std::vector<Edge> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) {
      throw GraphParseError("\"edges\" must be an array of [u, v] pairs", 0);
    }
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer()) {
        throw GraphParseError(
            fmt::format("malformed edge {} (expected [u, v])", e.dump()), 0);
      }
      const auto u = e[0].get<long long>();
      const auto v = e[1].get<long long>();
      if (u < 0 || v < 0 || u >= k || v >= k) {
        throw std::domain_error(fmt::format(
            "edge ({}, {}) out of range for K = {}", u, v, k));
      }
      edges.emplace_back(static_cast<Arm>(u), static_cast<Arm>(v));
    }
  }
  return BuildChecked(static_cast<std::size_t>(k), edges, options);
}

nlohmann::json GraphToJson(const FeedbackGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [u, v] : g.Edges()) edges.push_back({u, v});
  return {{"K", g.num_arms()}, {"edges", std::move(edges)}};
}

std::string SerializeEdgeList(const FeedbackGraph& g) {
  std::string out = fmt::format("{}\n", g.num_arms());
  for (const auto& [u, v] : g.Edges()) out += fmt::format("{} {}\n", u, v);
  return out;
}

FeedbackGraph StrongSubgraph(const FeedbackGraph& g) {
  std::vector<Edge> edges;
  for (Arm u = 0; u < g.num_arms(); ++u) {
    for (Arm v : g.out_neighbors(u)) {
      if (g.HasEdge(v, u)) edges.emplace_back(u, v);
    }
  }
  return FeedbackGraph(g.num_arms(), edges);
}

std::vector<Arm> MaximumIndependentSet(const FeedbackGraph& g,
                                       bool ignore_directions,
                                       std::size_t cap) {
  CheckCap(g, cap, "independence number");
  const Mask all = (Mask{1} << g.num_arms()) - 1;
  IndependentSetSearch search(ConflictMasks(g, ignore_directions));
  const Mask best = search.Run(all);
  std::vector<Arm> set;
  for (Arm i = 0; i < g.num_arms(); ++i) {
    if (best & Bit(i)) set.push_back(i);
  }
  return set;
}

std::size_t IndependenceNumber(const FeedbackGraph& g, bool ignore_directions,
                               std::size_t cap) {
  return MaximumIndependentSet(g, ignore_directions, cap).size();
}

std::size_t StrongIndependenceNumber(const FeedbackGraph& g, std::size_t cap) {
  return IndependenceNumber(StrongSubgraph(g), /*ignore_directions=*/true, cap);
}

std::size_t MaximumAcyclicSubgraph(const FeedbackGraph& g, std::size_t cap) {
  CheckCap(g, cap, "maximum acyclic subgraph");
  const std::size_t k = g.num_arms();
  std::vector<Mask> successors(k, 0);
  for (Arm u = 0; u < k; ++u) {
    for (Arm v : g.out_neighbors(u)) {
      if (u != v) successors[u] |= Bit(v);
    }
  }
  int best = 0;
  const Mask end = Mask{1} << k;
  for (Mask subset = 1; subset < end; ++subset) {
    const int size = std::popcount(subset);
    if (size <= best) continue;
    if (InducedSubgraphIsAcyclic(successors, subset)) best = size;
  }
  return static_cast<std::size_t>(best);
}

bool IsDominating(const FeedbackGraph& g, std::span<const Arm> set) {
  std::vector<bool> covered(g.num_arms(), false);
  for (Arm j : set) {
    for (Arm i : g.out_neighbors(j)) covered[i] = true;
  }
  return std::all_of(covered.begin(), covered.end(), [](bool c) { return c; });
}

bool IsStronglyIndependent(const FeedbackGraph& g, std::span<const Arm> set) {
  for (std::size_t a = 0; a < set.size(); ++a) {
    for (std::size_t b = a + 1; b < set.size(); ++b) {
      if (set[a] != set[b] && g.HasMutualEdge(set[a], set[b])) return false;
    }
  }
  return true;
}

bool IsIndependent(const FeedbackGraph& g, std::span<const Arm> set) {
  for (std::size_t a = 0; a < set.size(); ++a) {
    for (std::size_t b = a + 1; b < set.size(); ++b) {
      if (set[a] == set[b]) continue;
      if (g.HasEdge(set[a], set[b]) || g.HasEdge(set[b], set[a])) return false;
    }
  }
  return true;
}

GraphStats ComputeGraphStats(const FeedbackGraph& g,
                             std::size_t independence_cap,
                             std::size_t mas_cap) {
  GraphStats stats;
  stats.alpha = IndependenceNumber(g, true, independence_cap);
  stats.alpha_strong = StrongIndependenceNumber(g, independence_cap);
  if (g.num_arms() <= mas_cap) stats.mas = MaximumAcyclicSubgraph(g, mas_cap);
  stats.is_undirected = g.IsUndirected();
  return stats;
}

nlohmann::json GraphStatsToJson(const GraphStats& stats) {
  nlohmann::json j = {{"alpha", stats.alpha},
                      {"alpha_strong", stats.alpha_strong},
                      {"is_undirected", stats.is_undirected}};
  j["mas"] = stats.mas ? nlohmann::json(*stats.mas) : nlohmann::json(nullptr);
  return j;
}

}  // namespace graphbandit
