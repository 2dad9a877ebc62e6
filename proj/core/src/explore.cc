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

#include "graphbandit/explore.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace graphbandit {
namespace {

void SortByGap(std::span<const double> gaps, std::vector<Arm>& order) {
  order.resize(gaps.size());
  std::iota(order.begin(), order.end(), Arm{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Arm a, Arm b) { return gaps[a] < gaps[b]; });
}

void CheckParams(std::size_t t, double lambda, double beta,
                 std::size_t num_arms) {
  if (num_arms < 2) {
    throw std::domain_error(fmt::format("need K >= 2 arms, got {}", num_arms));
  }
  if (t < 2) {
    throw std::domain_error(fmt::format("exploration needs t >= 2, got {}", t));
  }
  if (!(lambda >= 1.0 && lambda <= static_cast<double>(num_arms))) {
    throw std::invalid_argument(
        fmt::format("lambda = {} outside [1, {}]", lambda, num_arms));
  }
  if (!(beta > 0.0)) {
    throw std::invalid_argument(fmt::format("beta must be > 0, got {}", beta));
  }
}

double GapTerm(double gap, double beta, double log_t, double t) {
  if (gap == 0.0) return std::numeric_limits<double>::infinity();
  return beta * log_t / (t * gap * gap);
}

}  // namespace

std::vector<Arm> AscendingGapOrder(std::span<const double> gaps) {
  std::vector<Arm> order;
  SortByGap(gaps, order);
  return order;
}

std::vector<Arm> BuildExplorationSetFromOrder(const FeedbackGraph& g,
                                              std::span<const Arm> order) {
  std::vector<bool> removed(g.num_arms(), false);
  std::vector<Arm> set;
  for (Arm i : order) {
    if (removed[i]) continue;
    set.push_back(i);
    for (Arm j : g.out_neighbors(i)) removed[j] = true;
  }
  return set;
}

std::vector<Arm> BuildExplorationSet(const FeedbackGraph& g,
                                     std::span<const double> gaps) {
  const auto order = AscendingGapOrder(gaps);
  return BuildExplorationSetFromOrder(g, order);
}

double ExplorationCap(std::size_t t, double lambda, std::size_t num_arms) {
  CheckParams(t, lambda, 1.0, num_arms);
  const double k = static_cast<double>(num_arms);
  const double td = static_cast<double>(t);
  return std::min(1.0 / (2.0 * k),
                  0.5 * std::sqrt(lambda * std::log(k) / (td * k * k)));
}

void ExplorationRatesInto(std::span<const Arm> exploration_set,
                          std::span<const double> gaps, std::size_t t,
                          double lambda, double beta, std::span<double> out) {
  const std::size_t k = gaps.size();
  CheckParams(t, lambda, beta, k);
  const double cap = ExplorationCap(t, lambda, k);
  const double td = static_cast<double>(t);
  const double log_t = std::log(td);
  const double outside = 4.0 / (td * td);
  for (Arm i = 0; i < k; ++i) out[i] = std::min(cap, outside);
  for (Arm i : exploration_set) {
    out[i] = std::min(cap, GapTerm(gaps[i], beta, log_t, td));
  }
}

std::vector<double> ExplorationRates(std::span<const Arm> exploration_set,
                                     std::span<const double> gaps,
                                     std::size_t t, double lambda, double beta,
                                     std::size_t num_arms) {
  if (gaps.size() != num_arms) {
    throw std::invalid_argument("gap vector length differs from K");
  }
  std::vector<double> out(num_arms);
  ExplorationRatesInto(exploration_set, gaps, t, lambda, beta, out);
  return out;
}

void ObservationLowerBoundInto(std::span<const double> gaps, std::size_t t,
                               double lambda, double beta,
                               std::span<double> out) {
  const std::size_t k = gaps.size();
  CheckParams(t, lambda, beta, k);
  const double cap = ExplorationCap(t, lambda, k);
  const double td = static_cast<double>(t);
  const double log_t = std::log(td);
  for (Arm i = 0; i < k; ++i) {
    out[i] = std::min(cap, GapTerm(gaps[i], beta, log_t, td));
  }
}

std::vector<double> ObservationLowerBound(std::span<const double> gaps,
                                          std::size_t t, double lambda,
                                          double beta, std::size_t num_arms) {
  if (gaps.size() != num_arms) {
    throw std::invalid_argument("gap vector length differs from K");
  }
  std::vector<double> out(num_arms);
  ObservationLowerBoundInto(gaps, t, lambda, beta, out);
  return out;
}

ExplorationPlanner::ExplorationPlanner(std::size_t num_arms, double lambda,
                                       double beta, bool force_rebuild)
    : num_arms_(num_arms), force_rebuild_(force_rebuild) {
  CheckParams(2, lambda, beta, num_arms);
  plan_.lambda = lambda;
  plan_.beta = beta;
  plan_.epsilon.assign(num_arms, 0.0);
  plan_.o_lower.assign(num_arms, 0.0);
}

const ExplorationPlan& ExplorationPlanner::Update(const FeedbackGraph& g,
                                                  std::span<const double> gaps,
                                                  std::size_t t) {
  if (gaps.size() != num_arms_ || g.num_arms() != num_arms_) {
    throw std::invalid_argument("graph or gap vector size differs from K");
  }
  SortByGap(gaps, scratch_order_);
  const bool stale = force_rebuild_ || !cached_graph_ ||
                     scratch_order_ != plan_.sorted_order ||
                     !(*cached_graph_ == g);
  if (stale) {
    plan_.sorted_order.swap(scratch_order_);
    plan_.exploration_set = BuildExplorationSetFromOrder(g, plan_.sorted_order);
    if (!cached_graph_ || !(*cached_graph_ == g)) cached_graph_.emplace(g);
    ++rebuild_count_;
  }
  plan_.round = t;
  ExplorationRatesInto(plan_.exploration_set, gaps, t, plan_.lambda,
                       plan_.beta, plan_.epsilon);
  ObservationLowerBoundInto(gaps, t, plan_.lambda, plan_.beta, plan_.o_lower);
  return plan_;
}

}  // namespace graphbandit
