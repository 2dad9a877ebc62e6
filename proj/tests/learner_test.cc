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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "graphbandit/env.h"
#include "graphbandit/rng.h"
#include "graphbandit/verify.h"
#include "oracles.h"

namespace graphbandit {
namespace {

using testing::NaiveObservationProbabilities;

LearnerConfig Resolved(const FeedbackGraph& g, EtaMode mode = EtaMode::kFixedGraph,
                       std::uint64_t seed = 1) {
  LearnerConfig config;
  config.eta_mode = mode;
  config.seed = seed;
  return ResolveConfig(config, g);
}

std::vector<double> NaiveSoftmax(const std::vector<double>& cumulative, double eta) {
  std::vector<double> w(cumulative.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(-eta * cumulative[i]);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

TEST(LearningRateTest, Examples) {
  EXPECT_DOUBLE_EQ(FixedGraphLearningRate(8, 2, 1), std::sqrt(std::log(2.0) / 16.0));
  EXPECT_NEAR(FixedGraphLearningRate(8, 2, 1), 0.20814, 1e-5);
  EXPECT_DOUBLE_EQ(TimeVaryingLearningRate(6, 6.0), std::sqrt(std::log(6.0) / 12.0));
  EXPECT_DOUBLE_EQ(Exp3LearningRate(20, 4), std::sqrt(std::log(4.0) / 80.0));
}

TEST(ExponentialWeightsTest, Examples) {
  for (double q : ExponentialWeights(std::vector<double>(4, 3.5), 0.7)) {
    EXPECT_DOUBLE_EQ(q, 0.25);
  }
  const auto q = ExponentialWeights(std::vector<double>{0.0, 1000.0}, 1.0);
  EXPECT_DOUBLE_EQ(q[0], 1.0);
  EXPECT_LT(q[1], 1e-300);
}

TEST(ExponentialWeightsTest, ShiftInvariantAndOverflowSafe) {
  const std::vector<double> base{0.125, 2.5, 1.75, 0.0, 3.0};
  std::vector<double> shifted = base;
  for (double& x : shifted) x += 1024.0;
  EXPECT_EQ(ExponentialWeights(base, 0.5), ExponentialWeights(shifted, 0.5));
  const auto huge = ExponentialWeights(std::vector<double>{1e300, 1e300 + 1e285}, 1.0);
  EXPECT_DOUBLE_EQ(huge[0], 1.0);
  EXPECT_TRUE(std::isfinite(huge[1]));
}

TEST(SamplingTest, InverseCdf) {
  const std::vector<double> p{0.25, 0.25, 0.5};
  EXPECT_EQ(SampleInverseCdf(p, 0.0), 0u);
  EXPECT_EQ(SampleInverseCdf(p, 0.2499), 0u);
  EXPECT_EQ(SampleInverseCdf(p, 0.25), 1u);
  EXPECT_EQ(SampleInverseCdf(p, 0.75), 2u);
  EXPECT_EQ(SampleInverseCdf(p, std::nextafter(1.0, 0.0)), 2u);
}

TEST(EstimatesTest, ObservationProbabilitiesMatchNaive) {
  Rng rng(4);
  for (int n = 0; n < 100; ++n) {
    const std::size_t k = 2 + n % 10;
    const auto g = RandomGraph(rng, k);
    const auto p = RandomDistribution(rng, k);
    const auto expected = NaiveObservationProbabilities(g, p);
    const auto actual = ObservationProbabilities(g, p);
    for (Arm i = 0; i < k; ++i) EXPECT_NEAR(actual[i], expected[i], 1e-15);
  }
}

TEST(EstimatesTest, UnbiasedByEnumeration) {
  Rng rng(6);
  for (int n = 0; n < 100; ++n) {
    const std::size_t k = 2 + n % 10;
    const auto g = RandomGraph(rng, k);
    const auto p = RandomDistribution(rng, k);
    std::vector<double> losses(k);
    for (double& l : losses) l = rng.Uniform();
    EXPECT_FALSE(CheckUnbiased(g, p, losses, GraphImportanceEstimator).has_value());
  }
}

TEST(ConfigTest, Validation) {
  const auto g = FeedbackGraph::Complete(4);
  LearnerConfig config;
  config.beta = 319.0;
  EXPECT_THROW(ResolveConfig(config, g), std::invalid_argument);
  config.beta = 320.0;
  config.gamma = 2.0;
  EXPECT_THROW(ResolveConfig(config, g), std::invalid_argument);
  config.gamma = 4.0;
  config.lambda = 5.0;
  EXPECT_THROW(ResolveConfig(config, g), std::invalid_argument);
  config.lambda.reset();
  const auto resolved = ResolveConfig(config, g);
  EXPECT_EQ(resolved.alpha_tilde, 1u);
  EXPECT_DOUBLE_EQ(*resolved.lambda, 1.0);
  const auto bandit = ResolveConfig({}, FeedbackGraph::Bandit(5));
  EXPECT_DOUBLE_EQ(*bandit.lambda, 5.0);
  LearnerConfig tv;
  tv.eta_mode = EtaMode::kTimeVarying;
  EXPECT_DOUBLE_EQ(*ResolveConfig(tv, FeedbackGraph::Bandit(5)).lambda, 1.0);
}

TEST(Exp3GppTest, InitializationOnBanditGraph) {
  const auto g = FeedbackGraph::Bandit(5);
  Exp3GppLearner learner(5, Resolved(g));
  EXPECT_EQ(learner.InitialActions(), (std::vector<Arm>{0, 1, 2, 3, 4}));
  const std::vector<double> losses(5, 0.5);
  for (Arm i = 0; i < 5; ++i) {
    EXPECT_EQ(learner.Step(g, losses), i);
    EXPECT_TRUE(learner.last_round().initialization);
  }
  for (Arm i = 0; i < 5; ++i) {
    EXPECT_EQ(learner.estimator().observation_count()[i], 1u);
    EXPECT_DOUBLE_EQ(learner.estimator().observed_loss()[i], 0.5);
    EXPECT_EQ(learner.cumulative_estimates()[i], 0.0);
  }
  EXPECT_EQ(learner.round(), 6u);
}

TEST(Exp3GppTest, InitializationOnCompleteGraph) {
  const auto g = FeedbackGraph::Complete(4);
  Exp3GppLearner learner(4, Resolved(g));
  const std::vector<double> losses{0.1, 0.2, 0.3, 0.4};
  for (int i = 0; i < 4; ++i) learner.Step(g, losses);
  for (Arm i = 0; i < 4; ++i) {
    EXPECT_EQ(learner.estimator().observation_count()[i], 4u);
  }
}

TEST(Exp3GppTest, TimeVaryingSeed) {
  const std::size_t k = 6;
  const auto g = FeedbackGraph::Bandit(k);
  Exp3GppLearner learner(k, Resolved(g, EtaMode::kTimeVarying));
  const std::vector<double> losses(k, 0.5);
  for (std::size_t t = 1; t <= k; ++t) learner.Step(g, losses);
  EXPECT_DOUBLE_EQ(learner.theta_cumsum(), static_cast<double>(k));
  learner.Step(g, losses);
  EXPECT_DOUBLE_EQ(learner.last_round().eta,
                   std::sqrt(std::log(static_cast<double>(k)) / (2.0 * k)));
  EXPECT_DOUBLE_EQ(learner.theta_cumsum(), k + learner.last_round().theta);
}

// Rebuilds every derived quantity of a round from the previous cumulative
// estimates and compares it with the learner's record.
TEST(Exp3GppTest, StepMatchesIndependentRecomputation) {
  Rng rng(31);
  for (int run = 0; run < 6; ++run) {
    const std::size_t k = 3 + run;
    const auto g = RandomGraph(rng, k);
    const bool tv = run % 2 == 1;
    Exp3GppLearner learner(k, Resolved(g, tv ? EtaMode::kTimeVarying
                                             : EtaMode::kFixedGraph, run));
    const std::size_t alpha_tilde = StrongIndependenceNumber(g);
    std::vector<double> means(k);
    for (double& m : means) m = rng.Uniform();
    const StochasticEnv env(means);
    std::vector<double> losses(k);
    double theta_sum = static_cast<double>(k);
    for (std::size_t t = 1; t <= 600; ++t) {
      env.LossesAt(run, t, losses);
      const std::vector<double> before(learner.cumulative_estimates().begin(),
                                       learner.cumulative_estimates().end());
      const Arm arm = learner.Step(g, losses);
      const RoundRecord& r = learner.last_round();
      if (t <= k) {
        ASSERT_EQ(arm, t - 1);
        continue;
      }
      const double eta =
          tv ? std::sqrt(std::log(static_cast<double>(k)) / (2.0 * theta_sum))
             : std::sqrt(std::log(static_cast<double>(k)) /
                         (2.0 * static_cast<double>(alpha_tilde * t)));
      ASSERT_NEAR(r.eta, eta, 1e-15);
      const auto q = NaiveSoftmax(before, eta);
      const double mix =
          1.0 - std::accumulate(r.epsilon.begin(), r.epsilon.end(), 0.0);
      for (Arm i = 0; i < k; ++i) {
        ASSERT_NEAR(r.q[i], q[i], 1e-12);
        ASSERT_NEAR(r.p[i], mix * r.q[i] + r.epsilon[i], 1e-15);
      }
      const auto big_p = NaiveObservationProbabilities(g, r.p);
      double theta = 0.0;
      for (Arm i = 0; i < k; ++i) {
        theta += r.p[i] / big_p[i];
        const double est = g.HasEdge(arm, i) ? losses[i] / big_p[i] : 0.0;
        ASSERT_NEAR(r.estimates[i], est, 1e-12 * (1.0 + est));
        ASSERT_NEAR(learner.cumulative_estimates()[i], before[i] + est,
                    1e-9 * (1.0 + before[i]));
      }
      ASSERT_NEAR(r.theta, theta, 1e-12);
      ASSERT_EQ(r.observed.size(), g.out_neighbors(arm).size());
      ASSERT_FALSE(CheckRoundInvariants(g, r).has_value());
      theta_sum += r.theta;
    }
  }
}

TEST(Exp3GppTest, DeterministicPerSeed) {
  const auto g = FeedbackGraph::Complete(5);
  auto play = [&](std::uint64_t seed) {
    Exp3GppLearner learner(5, Resolved(g, EtaMode::kFixedGraph, seed));
    const std::vector<double> losses{0.5, 0.4, 0.6, 0.5, 0.7};
    std::vector<Arm> arms;
    for (int t = 0; t < 500; ++t) arms.push_back(learner.Step(g, losses));
    return arms;
  };
  EXPECT_EQ(play(7), play(7));
  EXPECT_NE(play(7), play(8));
}

TEST(Exp3GppTest, RejectsOutOfRangeLoss) {
  const auto g = FeedbackGraph::Complete(3);
  Exp3GppLearner learner(3, Resolved(g));
  EXPECT_THROW(learner.Step(g, std::vector<double>{0.5, 1.5, 0.5}),
               std::domain_error);
}

TEST(Exp3Test, BanditFeedbackOnly) {
  const auto g = FeedbackGraph::Complete(4);
  Exp3Learner learner(4, 3);
  std::vector<double> losses{0.2, 0.4, 0.6, 0.8};
  for (int t = 1; t <= 300; ++t) {
    const Arm arm = learner.Step(g, losses);
    const RoundRecord& r = learner.last_round();
    ASSERT_EQ(r.observed.size(), 1u);
    ASSERT_EQ(r.observed[0].arm, arm);
    if (t > 4) {
      ASSERT_EQ(r.p, r.q);
      ASSERT_DOUBLE_EQ(r.eta, std::sqrt(std::log(4.0) / (t * 4.0)));
      for (Arm i = 0; i < 4; ++i) {
        ASSERT_DOUBLE_EQ(r.estimates[i], i == arm ? losses[i] / r.p[i] : 0.0);
      }
    }
  }
}

}  // namespace
}  // namespace graphbandit
