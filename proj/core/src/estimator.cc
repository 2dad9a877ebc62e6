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

#include "graphbandit/estimator.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace graphbandit {

GapEstimator::GapEstimator(std::size_t num_arms, double gamma)
    : gamma_(gamma),
      observed_loss_(num_arms, 0.0),
      observation_count_(num_arms, 0) {
  if (num_arms < 2) {
    throw std::domain_error(fmt::format("need K >= 2 arms, got {}", num_arms));
  }
  if (!(gamma >= 3.0)) {
    throw std::invalid_argument(fmt::format("gamma must be >= 3, got {}", gamma));
  }
}

void GapEstimator::Record(Arm arm, double loss) {
  if (!(loss >= 0.0 && loss <= 1.0)) {
    throw std::domain_error(
        fmt::format("loss {} for arm {} is outside [0, 1]", loss, arm));
  }
  observed_loss_.at(arm) += loss;
  observation_count_[arm] += 1;
}

void GapEstimator::RecordObservations(std::span<const Observation> observed) {
  for (const auto& [arm, loss] : observed) Record(arm, loss);
}

double GapEstimator::ConfidenceWidth(Arm arm, std::size_t t) const {
  const double count = static_cast<double>(observation_count_[arm]);
  const double log_term = std::log(static_cast<double>(t)) +
                          std::log(static_cast<double>(num_arms())) / gamma_;
  return std::sqrt(gamma_ * log_term / (2.0 * count));
}

GapSnapshot GapEstimator::Snapshot(std::size_t t) const {
  GapSnapshot snapshot;
  SnapshotInto(t, snapshot);
  return snapshot;
}

void GapEstimator::SnapshotInto(std::size_t t, GapSnapshot& out) const {
  const std::size_t k = num_arms();
  if (t < k + 1) {
    throw std::logic_error(fmt::format(
        "gap snapshot requested at round {} before initialization ends", t));
  }
  out.round = t;
  out.ucb.resize(k);
  out.lcb.resize(k);
  out.delta_hat.resize(k);
  double min_ucb = std::numeric_limits<double>::infinity();
  for (Arm i = 0; i < k; ++i) {
    if (observation_count_[i] == 0) {
      throw std::logic_error(
          fmt::format("arm {} has never been observed", i));
    }
    const double mean =
        observed_loss_[i] / static_cast<double>(observation_count_[i]);
    const double width = ConfidenceWidth(i, t);
    out.ucb[i] = std::min(1.0, mean + width);
    out.lcb[i] = std::max(0.0, mean - width);
    min_ucb = std::min(min_ucb, out.ucb[i]);
  }
  for (Arm i = 0; i < k; ++i) {
    out.delta_hat[i] = std::max(0.0, out.lcb[i] - min_ucb);
  }
}

}  // namespace graphbandit
