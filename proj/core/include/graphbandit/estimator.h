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

#ifndef GRAPHBANDIT_ESTIMATOR_H_
#define GRAPHBANDIT_ESTIMATOR_H_

#include <cstddef>
#include <span>
#include <vector>

#include "graphbandit/graph.h"

namespace graphbandit {

struct Observation {
  Arm arm;
  double loss;
};

// Confidence bounds and gap estimates at one round. All entries lie in
// [0, 1] and lcb[i] <= ucb[i].
struct GapSnapshot {
  std::size_t round = 0;
  std::vector<double> ucb;
  std::vector<double> lcb;
  std::vector<double> delta_hat;
};

// Per-arm observation counts and observed-loss sums, updated whenever an
// arm's loss is revealed (played or not).
class GapEstimator {
 public:
  // gamma is the confidence-width exponent, gamma >= 3.
  GapEstimator(std::size_t num_arms, double gamma = 4.0);

  // Throws std::domain_error when loss is outside [0, 1].
  void Record(Arm arm, double loss);
  void RecordObservations(std::span<const Observation> observed);

  // Requires t >= K + 1 and at least one observation of every arm.
  //   w_i     = sqrt(gamma (ln t + ln K / gamma) / (2 O_i))
  //   ucb_i   = min(1, mean_i + w_i),  lcb_i = max(0, mean_i - w_i)
  //   delta_i = max(0, lcb_i - min_j ucb_j), j ranging over all arms.
  GapSnapshot Snapshot(std::size_t t) const;
  void SnapshotInto(std::size_t t, GapSnapshot& out) const;

  double ConfidenceWidth(Arm arm, std::size_t t) const;

  std::size_t num_arms() const { return observed_loss_.size(); }
  double gamma() const { return gamma_; }
  std::span<const double> observed_loss() const { return observed_loss_; }
  std::span<const std::size_t> observation_count() const {
    return observation_count_;
  }

 private:
  double gamma_;
  std::vector<double> observed_loss_;
  std::vector<std::size_t> observation_count_;
};

}  // namespace graphbandit

#endif  // GRAPHBANDIT_ESTIMATOR_H_
