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

#ifndef GRAPHBANDIT_EXPLORE_H_
#define GRAPHBANDIT_EXPLORE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "graphbandit/graph.h"

namespace graphbandit {

inline constexpr double kDefaultBeta = 320.0;

// Arms sorted by ascending gap; ties broken by ascending arm index.
std::vector<Arm> AscendingGapOrder(std::span<const double> gaps);

// Greedy exploration set: walk `order`, add each arm that is still
// available and discard its whole out-neighborhood. The result is a
// dominating, strongly independent set in which every arm i is covered by
// a member j with gap_j <= gap_i.
std::vector<Arm> BuildExplorationSetFromOrder(const FeedbackGraph& g,
                                              std::span<const Arm> order);
std::vector<Arm> BuildExplorationSet(const FeedbackGraph& g,
                                     std::span<const double> gaps);

// The two gap-independent caps shared by the exploration rates and the
// observation lower bound: min(1/(2K), 0.5 sqrt(lambda ln K / (t K^2))).
// Throws std::domain_error for K < 2 or t < 2, std::invalid_argument for
// lambda outside [1, K] or beta <= 0.
double ExplorationCap(std::size_t t, double lambda, std::size_t num_arms);

// eps_i = min(cap, xi_i) with xi_i = beta ln t / (t gap_i^2) for members of
// the exploration set and 4 / t^2 otherwise. A zero gap gives xi_i = +inf.
void ExplorationRatesInto(std::span<const Arm> exploration_set,
                          std::span<const double> gaps, std::size_t t,
                          double lambda, double beta, std::span<double> out);
std::vector<double> ExplorationRates(std::span<const Arm> exploration_set,
                                     std::span<const double> gaps,
                                     std::size_t t, double lambda, double beta,
                                     std::size_t num_arms);

// o_i = min(cap, beta ln t / (t gap_i^2)) for every arm. Lower-bounds the
// probability that arm i is observed when the sampling distribution mixes
// in the exploration rates above.
void ObservationLowerBoundInto(std::span<const double> gaps, std::size_t t,
                               double lambda, double beta,
                               std::span<double> out);
std::vector<double> ObservationLowerBound(std::span<const double> gaps,
                                          std::size_t t, double lambda,
                                          double beta, std::size_t num_arms);

struct ExplorationPlan {
  std::size_t round = 0;
  double lambda = 1.0;
  double beta = kDefaultBeta;
  std::vector<Arm> exploration_set;
  std::vector<double> epsilon;
  std::vector<double> o_lower;
  std::vector<Arm> sorted_order;
};

// Produces the per-round plan and caches the exploration set. The set is
// rebuilt only when the ascending-gap order or the graph changes, unless
// force_rebuild is set.
class ExplorationPlanner {
 public:
  ExplorationPlanner(std::size_t num_arms, double lambda,
                     double beta = kDefaultBeta, bool force_rebuild = false);

  const ExplorationPlan& Update(const FeedbackGraph& g,
                                std::span<const double> gaps, std::size_t t);

  const ExplorationPlan& plan() const { return plan_; }
  std::size_t rebuild_count() const { return rebuild_count_; }

 private:
  std::size_t num_arms_;
  bool force_rebuild_;
  ExplorationPlan plan_;
  std::vector<Arm> scratch_order_;
  std::optional<FeedbackGraph> cached_graph_;
  std::size_t rebuild_count_ = 0;
};

}  // namespace graphbandit

#endif  // GRAPHBANDIT_EXPLORE_H_
