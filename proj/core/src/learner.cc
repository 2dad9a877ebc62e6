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

#include "graphbandit/learner.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace graphbandit {
namespace {

void CheckLoss(Arm arm, double loss) {
  if (!(loss >= 0.0 && loss <= 1.0)) {
    throw std::domain_error(
        fmt::format("environment returned loss {} for arm {}", loss, arm));
  }
}

void CheckInputs(const FeedbackGraph& graph, std::span<const double> losses,
                 std::size_t num_arms) {
  if (graph.num_arms() != num_arms || losses.size() != num_arms) {
    throw std::invalid_argument(fmt::format(
        "learner has K = {} but got a graph on {} arms and {} losses",
        num_arms, graph.num_arms(), losses.size()));
  }
}

// Rounds 1..K: play arm t-1 and record what it reveals.
void FillInitializationRound(const FeedbackGraph& graph, std::size_t t,
                             RoundRecord& record) {
  const std::size_t k = graph.num_arms();
  const Arm arm = t - 1;
  record.round = t;
  record.arm = arm;
  record.initialization = true;
  record.eta = 0.0;
  record.theta = 0.0;
  record.p.assign(k, 0.0);
  record.p[arm] = 1.0;
  record.q = record.p;
  record.observation_prob.assign(k, 0.0);
  record.estimates.assign(k, 0.0);
  record.observed.clear();
  record.gaps = GapSnapshot{};
  record.exploration_set.clear();
  record.epsilon.assign(k, 0.0);
  record.o_lower.assign(k, 0.0);
}

}  // namespace

LearnerConfig ResolveConfig(LearnerConfig config, const FeedbackGraph& graph) {
  const std::size_t k = graph.num_arms();
  if (config.eta_mode == EtaMode::kFixedGraph && !config.alpha_tilde) {
    config.alpha_tilde = StrongIndependenceNumber(graph);
  }
  if (!config.lambda) {
    config.lambda = config.eta_mode == EtaMode::kFixedGraph
                        ? static_cast<double>(*config.alpha_tilde)
                        : 1.0;
  }
  ValidateConfig(config, k);
  return config;
}

void ValidateConfig(const LearnerConfig& config, std::size_t num_arms) {
  if (!(config.gamma >= 3.0)) {
    throw std::invalid_argument(
        fmt::format("gamma must be >= 3, got {}", config.gamma));
  }
  if (!(config.beta >= 64.0 * (config.gamma + 1.0))) {
    throw std::invalid_argument(fmt::format(
        "beta must be >= 64 (gamma + 1) = {}, got {}",
        64.0 * (config.gamma + 1.0), config.beta));
  }
  if (!config.lambda) throw std::invalid_argument("lambda is unresolved");
  if (!(*config.lambda >= 1.0 &&
        *config.lambda <= static_cast<double>(num_arms))) {
    throw std::invalid_argument(
        fmt::format("lambda = {} outside [1, {}]", *config.lambda, num_arms));
  }
  if (config.eta_mode == EtaMode::kFixedGraph) {
    if (!config.alpha_tilde || *config.alpha_tilde < 1 ||
        *config.alpha_tilde > num_arms) {
      throw std::invalid_argument(
          "fixed-graph mode needs alpha_tilde in [1, K]");
    }
  }
}

void ExponentialWeightsInto(std::span<const double> cumulative, double eta,
                            std::span<double> out) {
  const double shift = *std::min_element(cumulative.begin(), cumulative.end());
  double total = 0.0;
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    out[i] = std::exp(-eta * (cumulative[i] - shift));
    total += out[i];
  }
  for (std::size_t i = 0; i < cumulative.size(); ++i) out[i] /= total;
}

std::vector<double> ExponentialWeights(std::span<const double> cumulative,
                                       double eta) {
  std::vector<double> out(cumulative.size());
  ExponentialWeightsInto(cumulative, eta, out);
  return out;
}

double FixedGraphLearningRate(std::size_t t, std::size_t num_arms,
                              std::size_t alpha_tilde) {
  return std::sqrt(std::log(static_cast<double>(num_arms)) /
                   (2.0 * static_cast<double>(alpha_tilde) *
                    static_cast<double>(t)));
}

double TimeVaryingLearningRate(std::size_t num_arms, double theta_cumsum) {
  return std::sqrt(std::log(static_cast<double>(num_arms)) /
                   (2.0 * theta_cumsum));
}

double Exp3LearningRate(std::size_t t, std::size_t num_arms) {
  const double k = static_cast<double>(num_arms);
  return std::sqrt(std::log(k) / (static_cast<double>(t) * k));
}

void ObservationProbabilitiesInto(const FeedbackGraph& g,
                                  std::span<const double> p,
                                  std::span<double> out) {
  for (Arm i = 0; i < g.num_arms(); ++i) {
    double total = 0.0;
    for (Arm j : g.in_neighbors(i)) total += p[j];
    out[i] = total;
  }
}

std::vector<double> ObservationProbabilities(const FeedbackGraph& g,
                                             std::span<const double> p) {
  std::vector<double> out(g.num_arms());
  ObservationProbabilitiesInto(g, p, out);
  return out;
}

double ObservationRatioSum(std::span<const double> p,
                           std::span<const double> observation_prob) {
  double theta = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) theta += p[i] / observation_prob[i];
  }
  return theta;
}

void ImportanceWeightedEstimatesInto(const FeedbackGraph& g,
                                     std::span<const double> observation_prob,
                                     Arm arm, std::span<const double> losses,
                                     std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (Arm i : g.out_neighbors(arm)) {
    assert(observation_prob[i] > 0.0);
    out[i] = losses[i] / observation_prob[i];
  }
}

Arm SampleInverseCdf(std::span<const double> p, double u) {
  double cumulative = 0.0;
  Arm last_positive = 0;
  for (Arm i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    cumulative += p[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  // Rounding left the total just below u.
  return last_positive;
}

Exp3GppLearner::Exp3GppLearner(std::size_t num_arms,
                               const LearnerConfig& config)
    : num_arms_(num_arms),
      config_(config),
      estimator_(num_arms, config.gamma),
      planner_(num_arms, config.lambda.value_or(1.0), config.beta,
               config.force_rebuild_exploration_set),
      rng_(config.seed),
      cumulative_(num_arms, 0.0),
      theta_cumsum_(static_cast<double>(num_arms)) {
  ValidateConfig(config_, num_arms_);
}

std::vector<Arm> Exp3GppLearner::InitialActions() const {
  std::vector<Arm> actions(num_arms_);
  std::iota(actions.begin(), actions.end(), Arm{0});
  return actions;
}

double Exp3GppLearner::LearningRate() const {
  if (config_.eta_mode == EtaMode::kFixedGraph) {
    return FixedGraphLearningRate(round_, num_arms_, *config_.alpha_tilde);
  }
  return TimeVaryingLearningRate(num_arms_, theta_cumsum_);
}

Arm Exp3GppLearner::Step(const FeedbackGraph& graph,
                         std::span<const double> losses) {
  CheckInputs(graph, losses, num_arms_);
  const std::size_t k = num_arms_;
  RoundRecord& r = record_;

  if (round_ <= k) {
    FillInitializationRound(graph, round_, r);
    for (Arm j : graph.out_neighbors(r.arm)) {
      CheckLoss(j, losses[j]);
      r.observation_prob[j] = 1.0;
      r.observed.push_back({j, losses[j]});
    }
    estimator_.RecordObservations(r.observed);
    ++round_;
    return r.arm;
  }

  const std::size_t t = round_;
  r.round = t;
  r.initialization = false;

  estimator_.SnapshotInto(t, r.gaps);
  const ExplorationPlan& plan = planner_.Update(graph, r.gaps.delta_hat, t);
  r.exploration_set.assign(plan.exploration_set.begin(),
                           plan.exploration_set.end());
  r.epsilon.assign(plan.epsilon.begin(), plan.epsilon.end());
  r.o_lower.assign(plan.o_lower.begin(), plan.o_lower.end());

  r.eta = LearningRate();
  r.q.resize(k);
  ExponentialWeightsInto(cumulative_, r.eta, r.q);
  const double total_eps = std::accumulate(r.epsilon.begin(), r.epsilon.end(), 0.0);
  r.p.resize(k);
  for (Arm i = 0; i < k; ++i) {
    r.p[i] = (1.0 - total_eps) * r.q[i] + r.epsilon[i];
  }

  r.arm = SampleInverseCdf(r.p, rng_.Uniform());

  r.observation_prob.resize(k);
  ObservationProbabilitiesInto(graph, r.p, r.observation_prob);
  r.observed.clear();
  for (Arm j : graph.out_neighbors(r.arm)) {
    CheckLoss(j, losses[j]);
    if (!(r.observation_prob[j] > 0.0)) {
      throw std::logic_error(fmt::format(
          "round {}: arm {} observed with zero observation probability", t, j));
    }
    r.observed.push_back({j, losses[j]});
  }

  r.estimates.resize(k);
  ImportanceWeightedEstimatesInto(graph, r.observation_prob, r.arm, losses,
                                  r.estimates);
  for (Arm i = 0; i < k; ++i) cumulative_[i] += r.estimates[i];
  estimator_.RecordObservations(r.observed);

  r.theta = ObservationRatioSum(r.p, r.observation_prob);
  if (config_.eta_mode == EtaMode::kTimeVarying) theta_cumsum_ += r.theta;

  ++round_;
  return r.arm;
}

Exp3Learner::Exp3Learner(std::size_t num_arms, std::uint64_t seed)
    : num_arms_(num_arms), rng_(seed), cumulative_(num_arms, 0.0) {
  if (num_arms < 2) {
    throw std::domain_error(fmt::format("need K >= 2 arms, got {}", num_arms));
  }
}

Arm Exp3Learner::Step(const FeedbackGraph& graph,
                      std::span<const double> losses) {
  CheckInputs(graph, losses, num_arms_);
  const std::size_t k = num_arms_;
  RoundRecord& r = record_;

  if (round_ <= k) {
    FillInitializationRound(graph, round_, r);
    CheckLoss(r.arm, losses[r.arm]);
    r.observation_prob[r.arm] = 1.0;
    r.observed.push_back({r.arm, losses[r.arm]});
    ++round_;
    return r.arm;
  }

  const std::size_t t = round_;
  r.round = t;
  r.initialization = false;
  r.eta = Exp3LearningRate(t, k);
  r.q.resize(k);
  ExponentialWeightsInto(cumulative_, r.eta, r.q);
  r.p = r.q;
  r.epsilon.assign(k, 0.0);
  r.arm = SampleInverseCdf(r.p, rng_.Uniform());

  // Bandit feedback: an arm is observed only when played.
  r.observation_prob = r.p;
  CheckLoss(r.arm, losses[r.arm]);
  r.observed.assign(1, {r.arm, losses[r.arm]});
  r.estimates.assign(k, 0.0);
  r.estimates[r.arm] = losses[r.arm] / r.p[r.arm];
  cumulative_[r.arm] += r.estimates[r.arm];
  r.theta = ObservationRatioSum(r.p, r.observation_prob);

  ++round_;
  return r.arm;
}

}  // namespace graphbandit
