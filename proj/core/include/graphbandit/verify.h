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

#ifndef GRAPHBANDIT_VERIFY_H_
#define GRAPHBANDIT_VERIFY_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphbandit/graph.h"
#include "graphbandit/learner.h"
#include "graphbandit/rng.h"

namespace graphbandit {

// nullopt on success, otherwise a description of the first violation.
using Failure = std::optional<std::string>;

inline constexpr double kProbabilityTolerance = 1e-12;

// Dominating, strongly independent, and every arm i covered by some j in
// the set with gaps[j] <= gaps[i].
Failure CheckExplorationSet(const FeedbackGraph& g, std::span<const double> gaps,
                            std::span<const Arm> set);

// Per-round distribution and mixing invariants of a non-initialization
// round: |sum p - 1| and |sum q - 1| <= tol, p_i >= 0, p_i >= q_i / 2,
// p_i >= eps_i, eps_i <= 1/(2K), sum eps <= 1/2 + tol, P_i >= o_i,
// 0 < theta <= K, plus CheckExplorationSet on the round's set.
Failure CheckRoundInvariants(const FeedbackGraph& g, const RoundRecord& record,
                             double tol = kProbabilityTolerance);

// Loss estimator under test: fills `out` after `arm` was played with
// sampling distribution p.
using LossEstimatorFn = std::function<void(
    const FeedbackGraph& g, std::span<const double> p, Arm arm,
    std::span<const double> losses, std::span<double> out)>;

// The learner's importance-weighted estimator.
void GraphImportanceEstimator(const FeedbackGraph& g, std::span<const double> p,
                              Arm arm, std::span<const double> losses,
                              std::span<double> out);

// Exact enumeration over all K outcomes: sum_k p_k est(k)_i = l_i for all i.
Failure CheckUnbiased(const FeedbackGraph& g, std::span<const double> p,
                      std::span<const double> losses,
                      const LossEstimatorFn& estimator,
                      double tol = kProbabilityTolerance);

// theta(p) <= mas(G) <= alpha_tilde(G) <= K and alpha(G) <= alpha_tilde(G),
// all by exhaustive oracles (K <= kMasCap).
Failure CheckCombinatorialChain(const FeedbackGraph& g, std::span<const double> p,
                                double tol = kProbabilityTolerance);

// Random instances for property checks.
FeedbackGraph RandomGraph(Rng& rng, std::size_t num_arms);
std::vector<double> RandomGaps(Rng& rng, std::size_t num_arms);
// Strictly positive, occasionally very skewed.
std::vector<double> RandomDistribution(Rng& rng, std::size_t num_arms);

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

CheckOutcome VerifyExplorationSets(std::size_t instances, std::size_t min_arms,
                                   std::size_t max_arms, std::uint64_t seed);
// Full learner runs on random and structured graphs with stochastic and
// adversarial losses; every round checked with CheckRoundInvariants.
CheckOutcome VerifyRunInvariants(std::size_t horizon, std::size_t num_arms,
                                 std::size_t runs, std::uint64_t seed);
CheckOutcome VerifyUnbiasedness(std::size_t instances, std::size_t max_arms,
                                std::uint64_t seed);
CheckOutcome VerifyCombinatorialChain(std::size_t instances,
                                      std::size_t max_arms, std::uint64_t seed);

struct ConcentrationReport {
  std::size_t checkpoint = 0;
  Arm arm = 0;
  std::size_t exceedances = 0;
  std::size_t replicates = 0;
  double bound = 0.0;
  double threshold = 0.0;
};

// Monte Carlo estimate of P[delta_hat_{t,i} >= max(Delta_min, Delta_i)] on
// two 5-cliques with Bernoulli means (0.25, 0.5, ..., 0.5). Passes when each
// frequency is at most b + 3 sqrt(b (1 - b) / n), b = 1 / (K t^(gamma-1)).
CheckOutcome VerifyGapConcentration(std::size_t replicates,
                                    std::span<const std::size_t> checkpoints,
                                    std::uint64_t seed,
                                    std::vector<ConcentrationReport>* reports = nullptr);

// Two identical in-memory experiments produce byte-identical trace CSVs.
CheckOutcome VerifyDeterminism(std::uint64_t seed);

enum class VerifyLevel { kFast, kFull };

std::vector<CheckOutcome> RunVerification(VerifyLevel level, std::uint64_t seed,
                                          std::ostream* log = nullptr);

}  // namespace graphbandit

#endif  // GRAPHBANDIT_VERIFY_H_
