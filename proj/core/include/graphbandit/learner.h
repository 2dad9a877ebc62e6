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

#ifndef GRAPHBANDIT_LEARNER_H_
#define GRAPHBANDIT_LEARNER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "graphbandit/estimator.h"
#include "graphbandit/explore.h"
#include "graphbandit/graph.h"
#include "graphbandit/rng.h"

namespace graphbandit {

enum class EtaMode {
  // eta_t = sqrt(ln K / (2 alpha_tilde t)) for a graph fixed in advance.
  kFixedGraph,
  // eta_t = sqrt(ln K / (2 sum_{s=K}^{t-1} theta_s)), theta_K := K. Works
  // with a graph that changes every round and needs no independence number.
  kTimeVarying,
};

struct LearnerConfig {
  double gamma = 4.0;
  double beta = kDefaultBeta;
  // Defaults to alpha_tilde in fixed-graph mode and to 1 in time-varying
  // mode (see ResolveConfig).
  std::optional<double> lambda;
  EtaMode eta_mode = EtaMode::kFixedGraph;
  // Strong independence number of the fixed graph. Computed by the exact
  // oracle when absent and K is within its cap.
  std::optional<std::size_t> alpha_tilde;
  std::uint64_t seed = 0;
  bool force_rebuild_exploration_set = false;
};

// Fills in alpha_tilde and lambda defaults using `graph` (the fixed graph,
// or the first graph of a schedule) and validates the result.
LearnerConfig ResolveConfig(LearnerConfig config, const FeedbackGraph& graph);

// gamma >= 3, beta >= 64 (gamma + 1), lambda in [1, K], and alpha_tilde in
// [1, K] in fixed-graph mode. Throws std::invalid_argument.
void ValidateConfig(const LearnerConfig& config, std::size_t num_arms);

// Softmax of -eta * cumulative, shifted by the minimum entry so that the
// largest weight is exactly exp(0) = 1.
void ExponentialWeightsInto(std::span<const double> cumulative, double eta,
                            std::span<double> out);
std::vector<double> ExponentialWeights(std::span<const double> cumulative,
                                       double eta);

double FixedGraphLearningRate(std::size_t t, std::size_t num_arms,
                              std::size_t alpha_tilde);
double TimeVaryingLearningRate(std::size_t num_arms, double theta_cumsum);
double Exp3LearningRate(std::size_t t, std::size_t num_arms);

// P_i = sum of p_j over the in-neighborhood of i.
void ObservationProbabilitiesInto(const FeedbackGraph& g,
                                  std::span<const double> p,
                                  std::span<double> out);
std::vector<double> ObservationProbabilities(const FeedbackGraph& g,
                                             std::span<const double> p);

// theta = sum_i p_i / P_i.
double ObservationRatioSum(std::span<const double> p,
                           std::span<const double> observation_prob);

// Importance-weighted loss estimates after playing `arm`:
// l_i / P_i for i in the out-neighborhood of `arm`, zero elsewhere.
void ImportanceWeightedEstimatesInto(const FeedbackGraph& g,
                                     std::span<const double> observation_prob,
                                     Arm arm, std::span<const double> losses,
                                     std::span<double> out);

// Inverse-CDF sampling in arm-index order with a single uniform u in [0,1).
Arm SampleInverseCdf(std::span<const double> p, double u);

// Everything the learner computed while playing one round.
struct RoundRecord {
  std::size_t round = 0;
  Arm arm = 0;
  // True for the K forced rounds that play each arm once.
  bool initialization = false;
  double eta = 0.0;
  double theta = 0.0;
  std::vector<double> q;
  std::vector<double> p;
  std::vector<double> observation_prob;
  std::vector<double> estimates;
  std::vector<Observation> observed;
  // Empty during initialization and for learners without gap estimates.
  GapSnapshot gaps;
  std::vector<Arm> exploration_set;
  std::vector<double> epsilon;
  std::vector<double> o_lower;
};

class Learner {
 public:
  virtual ~Learner() = default;

  virtual std::string_view algorithm() const = 0;
  virtual std::size_t num_arms() const = 0;
  // The round the next Step() call plays, starting at 1.
  virtual std::size_t round() const = 0;

  // Plays one round against `graph`. Only the entries of `losses` that
  // belong to arms the learner observes are read. Throws std::domain_error
  // when an observed loss is outside [0, 1].
  virtual Arm Step(const FeedbackGraph& graph,
                   std::span<const double> losses) = 0;

  virtual const RoundRecord& last_round() const = 0;
  virtual std::span<const double> cumulative_estimates() const = 0;
};

// Exponential weights with graph feedback, gap-driven exploration over a
// greedy exploration set, and importance-weighted loss estimates. Rounds
// 1..K play arms 0..K-1 to seed the gap estimates.
class Exp3GppLearner final : public Learner {
 public:
  // `config` must already be resolved (see ResolveConfig).
  Exp3GppLearner(std::size_t num_arms, const LearnerConfig& config);

  std::string_view algorithm() const override { return "exp3g++"; }
  std::size_t num_arms() const override { return num_arms_; }
  std::size_t round() const override { return round_; }
  Arm Step(const FeedbackGraph& graph, std::span<const double> losses) override;
  const RoundRecord& last_round() const override { return record_; }
  std::span<const double> cumulative_estimates() const override {
    return cumulative_;
  }

  // Arms forced during initialization, in play order.
  std::vector<Arm> InitialActions() const;

  const GapEstimator& estimator() const { return estimator_; }
  const ExplorationPlanner& planner() const { return planner_; }
  const LearnerConfig& config() const { return config_; }
  // sum_{s=K}^{t-1} theta_s with theta_K := K (time-varying mode).
  double theta_cumsum() const { return theta_cumsum_; }

 private:
  double LearningRate() const;

  std::size_t num_arms_;
  LearnerConfig config_;
  GapEstimator estimator_;
  ExplorationPlanner planner_;
  Rng rng_;
  std::vector<double> cumulative_;
  std::size_t round_ = 1;
  double theta_cumsum_;
  RoundRecord record_;
};

// Plain EXP3 with bandit feedback, ignoring the graph:
// eta_t = sqrt(ln K / (t K)), p = q. Uses the same K initialization rounds.
class Exp3Learner final : public Learner {
 public:
  Exp3Learner(std::size_t num_arms, std::uint64_t seed);

  std::string_view algorithm() const override { return "exp3"; }
  std::size_t num_arms() const override { return num_arms_; }
  std::size_t round() const override { return round_; }
  Arm Step(const FeedbackGraph& graph, std::span<const double> losses) override;
  const RoundRecord& last_round() const override { return record_; }
  std::span<const double> cumulative_estimates() const override {
    return cumulative_;
  }

 private:
  std::size_t num_arms_;
  Rng rng_;
  std::vector<double> cumulative_;
  std::size_t round_ = 1;
  RoundRecord record_;
};

}  // namespace graphbandit

#endif  // GRAPHBANDIT_LEARNER_H_
