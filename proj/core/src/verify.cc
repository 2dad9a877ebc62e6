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

#include "graphbandit/verify.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "graphbandit/env.h"
#include "graphbandit/explore.h"
#include "graphbandit/harness.h"

namespace graphbandit {
namespace {

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string FormatArms(std::span<const Arm> arms) {
  return fmt::format("{{{}}}", fmt::join(arms, ", "));
}

std::size_t UniformIndex(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.Uniform() *
                                       static_cast<double>(hi - lo + 1));
}

CheckOutcome Finish(std::string name, const Stopwatch& clock, Failure failure,
                    std::string summary) {
  CheckOutcome outcome;
  outcome.name = std::move(name);
  outcome.passed = !failure;
  outcome.detail = failure ? *failure : std::move(summary);
  outcome.seconds = clock.Seconds();
  return outcome;
}

}  // namespace

Failure CheckExplorationSet(const FeedbackGraph& g, std::span<const double> gaps,
                            std::span<const Arm> set) {
  if (!IsDominating(g, set)) {
    return fmt::format("exploration set {} is not dominating", FormatArms(set));
  }
  if (!IsStronglyIndependent(g, set)) {
    return fmt::format("exploration set {} is not strongly independent",
                       FormatArms(set));
  }
  for (Arm i = 0; i < g.num_arms(); ++i) {
    const bool covered = std::any_of(set.begin(), set.end(), [&](Arm j) {
      return g.HasEdge(j, i) && gaps[j] <= gaps[i];
    });
    if (!covered) {
      return fmt::format(
          "arm {} (gap {}) has no covering member of {} with a smaller gap", i,
          gaps[i], FormatArms(set));
    }
  }
  return std::nullopt;
}

Failure CheckRoundInvariants(const FeedbackGraph& g, const RoundRecord& r,
                             double tol) {
  const std::size_t k = g.num_arms();
  auto fail = [&](std::string what) {
    return fmt::format("round {}: {}", r.round, what);
  };
  const double sum_p = std::accumulate(r.p.begin(), r.p.end(), 0.0);
  const double sum_q = std::accumulate(r.q.begin(), r.q.end(), 0.0);
  const double sum_eps = std::accumulate(r.epsilon.begin(), r.epsilon.end(), 0.0);
  if (std::abs(sum_p - 1.0) > tol) return fail(fmt::format("sum p = {}", sum_p));
  if (std::abs(sum_q - 1.0) > tol) return fail(fmt::format("sum q = {}", sum_q));
  if (sum_eps > 0.5 + tol) return fail(fmt::format("sum eps = {}", sum_eps));
  const double eps_cap = 1.0 / (2.0 * static_cast<double>(k));
  for (Arm i = 0; i < k; ++i) {
    if (!(r.p[i] >= 0.0)) return fail(fmt::format("p[{}] = {}", i, r.p[i]));
    if (r.p[i] < r.q[i] / 2.0) {
      return fail(fmt::format("p[{}] = {} < q/2 = {}", i, r.p[i], r.q[i] / 2.0));
    }
    if (r.p[i] < r.epsilon[i]) {
      return fail(fmt::format("p[{}] = {} < eps = {}", i, r.p[i], r.epsilon[i]));
    }
    if (r.epsilon[i] > eps_cap) {
      return fail(fmt::format("eps[{}] = {} > 1/(2K)", i, r.epsilon[i]));
    }
    if (r.observation_prob[i] < r.o_lower[i]) {
      return fail(fmt::format("P[{}] = {} < o = {}", i, r.observation_prob[i],
                              r.o_lower[i]));
    }
  }
  if (!(r.theta > 0.0 && r.theta <= static_cast<double>(k) + tol)) {
    return fail(fmt::format("theta = {} outside (0, K]", r.theta));
  }
  if (auto bad = CheckExplorationSet(g, r.gaps.delta_hat, r.exploration_set)) {
    return fail(*bad);
  }
  return std::nullopt;
}

void GraphImportanceEstimator(const FeedbackGraph& g, std::span<const double> p,
                              Arm arm, std::span<const double> losses,
                              std::span<double> out) {
  const auto observation_prob = ObservationProbabilities(g, p);
  ImportanceWeightedEstimatesInto(g, observation_prob, arm, losses, out);
}

Failure CheckUnbiased(const FeedbackGraph& g, std::span<const double> p,
                      std::span<const double> losses,
                      const LossEstimatorFn& estimator, double tol) {
  const std::size_t k = g.num_arms();
  std::vector<double> expectation(k, 0.0);
  std::vector<double> estimate(k);
  for (Arm played = 0; played < k; ++played) {
    estimator(g, p, played, losses, estimate);
    for (Arm i = 0; i < k; ++i) expectation[i] += p[played] * estimate[i];
  }
  for (Arm i = 0; i < k; ++i) {
    if (std::abs(expectation[i] - losses[i]) > tol) {
      return fmt::format("E[estimate_{}] = {} but loss = {}", i, expectation[i],
                         losses[i]);
    }
  }
  return std::nullopt;
}

Failure CheckCombinatorialChain(const FeedbackGraph& g, std::span<const double> p,
                                double tol) {
  const auto observation_prob = ObservationProbabilities(g, p);
  const double theta = ObservationRatioSum(p, observation_prob);
  const std::size_t mas = MaximumAcyclicSubgraph(g);
  const std::size_t alpha_strong = StrongIndependenceNumber(g);
  const std::size_t alpha = IndependenceNumber(g);
  if (theta > static_cast<double>(mas) + tol) {
    return fmt::format("theta = {} > mas = {}", theta, mas);
  }
  if (mas > alpha_strong) {
    return fmt::format("mas = {} > alpha_tilde = {}", mas, alpha_strong);
  }
  if (alpha > alpha_strong) {
    return fmt::format("alpha = {} > alpha_tilde = {}", alpha, alpha_strong);
  }
  if (alpha_strong > g.num_arms()) {
    return fmt::format("alpha_tilde = {} > K", alpha_strong);
  }
  return std::nullopt;
}

FeedbackGraph RandomGraph(Rng& rng, std::size_t num_arms) {
  const double density = rng.Uniform();
  const double mutual = rng.Uniform();
  std::vector<Edge> edges;
  for (Arm u = 0; u < num_arms; ++u) {
    for (Arm v = u + 1; v < num_arms; ++v) {
      const double r = rng.Uniform();
      if (r < density * mutual) {
        edges.emplace_back(u, v);
        edges.emplace_back(v, u);
      } else if (r < density) {
        if (rng.Uniform() < 0.5) {
          edges.emplace_back(u, v);
        } else {
          edges.emplace_back(v, u);
        }
      }
    }
  }
  return FeedbackGraph(num_arms, edges);
}

std::vector<double> RandomGaps(Rng& rng, std::size_t num_arms) {
  std::vector<double> gaps(num_arms);
  const bool with_ties = rng.Uniform() < 0.3;
  for (double& gap : gaps) {
    gap = with_ties ? 0.1 * static_cast<double>(UniformIndex(rng, 0, 2))
                    : rng.Uniform();
  }
  return gaps;
}

std::vector<double> RandomDistribution(Rng& rng, std::size_t num_arms) {
  const double sharpness = rng.Uniform() < 0.2 ? 8.0 : 1.0;
  std::vector<double> p(num_arms);
  double total = 0.0;
  for (double& x : p) {
    x = std::pow(-std::log1p(-rng.Uniform()) + 1e-12, sharpness);
    total += x;
  }
  for (double& x : p) x /= total;
  return p;
}

CheckOutcome VerifyExplorationSets(std::size_t instances, std::size_t min_arms,
                                   std::size_t max_arms, std::uint64_t seed) {
  Stopwatch clock;
  Rng rng(DeriveSeed(seed, {101}));
  Failure failure;
  for (std::size_t n = 0; n < instances && !failure; ++n) {
    const std::size_t k = UniformIndex(rng, min_arms, max_arms);
    const auto g = RandomGraph(rng, k);
    const auto gaps = RandomGaps(rng, k);
    const auto set = BuildExplorationSet(g, gaps);
    if (auto bad = CheckExplorationSet(g, gaps, set)) {
      failure = fmt::format("instance {} (K = {}): {}", n, k, *bad);
    }
  }
  return Finish("exploration-set properties", clock, failure,
                fmt::format("{} instances, K in [{}, {}]", instances, min_arms,
                            max_arms));
}

CheckOutcome VerifyRunInvariants(std::size_t horizon, std::size_t num_arms,
                                 std::size_t runs, std::uint64_t seed) {
  Stopwatch clock;
  Rng rng(DeriveSeed(seed, {102}));
  Failure failure;
  std::size_t rounds_checked = 0;
  for (std::size_t run = 0; run < runs && !failure; ++run) {
    const std::size_t k = num_arms;
    const bool time_varying = run % 3 == 2;
    FeedbackGraph base = run % 3 == 0 ? RandomGraph(rng, k)
                         : run % 3 == 1 && k % 2 == 0
                             ? GenerateGraph({.family = GraphFamily::kCliques,
                                              .clique_count = 2,
                                              .clique_size = k / 2},
                                             0)
                             : RandomGraph(rng, k);
    GraphSchedule schedule =
        time_varying
            ? GraphSchedule::Random({.family = GraphFamily::kErdosRenyi,
                                     .num_arms = k,
                                     .edge_probability = 0.3,
                                     .directed = true},
                                    DeriveSeed(seed, {run}), 1)
            : GraphSchedule::Fixed(base);

    LearnerConfig config;
    config.seed = DeriveSeed(seed, {103, run});
    config.eta_mode = time_varying ? EtaMode::kTimeVarying : EtaMode::kFixedGraph;
    GraphCursor cursor;
    config = ResolveConfig(config, schedule.At(1, cursor));
    Exp3GppLearner learner(k, config);

    std::vector<double> means(k);
    for (double& m : means) m = 0.25 + 0.5 * rng.Uniform();
    const StochasticEnv stochastic(means);
    const bool adversarial = run % 2 == 1;
    const auto sequence =
        adversarial ? UniformIidSequence(k, horizon, DeriveSeed(seed, {104, run}))
                    : LossSequence(k, {});
    std::vector<double> losses(k);
    double previous_eta = std::numeric_limits<double>::infinity();
    for (std::size_t t = 1; t <= horizon && !failure; ++t) {
      if (adversarial) {
        const auto row = sequence.LossesAt(t);
        std::copy(row.begin(), row.end(), losses.begin());
      } else {
        stochastic.LossesAt(DeriveSeed(seed, {105, run}), t, losses);
      }
      const FeedbackGraph& g = schedule.At(t, cursor);
      learner.Step(g, losses);
      const RoundRecord& r = learner.last_round();
      if (r.initialization) continue;
      if (auto bad = CheckRoundInvariants(g, r)) {
        failure = fmt::format("run {}: {}", run, *bad);
      } else if (r.eta > previous_eta) {
        failure = fmt::format("run {} round {}: eta increased", run, t);
      }
      previous_eta = r.eta;
      ++rounds_checked;
    }
  }
  return Finish("distribution and mixing invariants", clock, failure,
                fmt::format("{} runs, {} rounds checked (T = {}, K = {})", runs,
                            rounds_checked, horizon, num_arms));
}

CheckOutcome VerifyUnbiasedness(std::size_t instances, std::size_t max_arms,
                                std::uint64_t seed) {
  Stopwatch clock;
  Rng rng(DeriveSeed(seed, {106}));
  Failure failure;
  for (std::size_t n = 0; n < instances && !failure; ++n) {
    const std::size_t k = UniformIndex(rng, 2, max_arms);
    const auto g = RandomGraph(rng, k);
    const auto p = RandomDistribution(rng, k);
    std::vector<double> losses(k);
    for (double& l : losses) l = rng.Uniform();
    if (auto bad = CheckUnbiased(g, p, losses, GraphImportanceEstimator)) {
      failure = fmt::format("instance {} (K = {}): {}", n, k, *bad);
    }
  }
  return Finish("estimator unbiasedness", clock, failure,
                fmt::format("{} (graph, p, loss) triples", instances));
}

CheckOutcome VerifyCombinatorialChain(std::size_t instances,
                                      std::size_t max_arms, std::uint64_t seed) {
  Stopwatch clock;
  Rng rng(DeriveSeed(seed, {107}));
  Failure failure;
  for (std::size_t n = 0; n < instances && !failure; ++n) {
    const std::size_t k = UniformIndex(rng, 2, max_arms);
    const auto g = RandomGraph(rng, k);
    const auto p = RandomDistribution(rng, k);
    if (auto bad = CheckCombinatorialChain(g, p)) {
      failure = fmt::format("instance {} (K = {}): {}", n, k, *bad);
    }
  }
  return Finish("theta <= mas <= alpha_tilde <= K", clock, failure,
                fmt::format("{} graphs, K <= {}", instances, max_arms));
}

CheckOutcome VerifyGapConcentration(std::size_t replicates,
                                    std::span<const std::size_t> checkpoints,
                                    std::uint64_t seed,
                                    std::vector<ConcentrationReport>* reports) {
  Stopwatch clock;
  const std::size_t k = 10;
  const auto graph = GenerateGraph(
      {.family = GraphFamily::kCliques, .clique_count = 2, .clique_size = 5}, 0);
  std::vector<double> means(k, 0.5);
  means[0] = 0.25;
  const StochasticEnv env(means);
  const auto floors = env.GapFloors();

  LearnerConfig base;
  base = ResolveConfig(base, graph);
  const std::size_t horizon =
      *std::max_element(checkpoints.begin(), checkpoints.end());

  std::vector<std::vector<std::size_t>> exceed(checkpoints.size(),
                                               std::vector<std::size_t>(k, 0));
  std::vector<double> losses(k);
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    LearnerConfig config = base;
    config.seed = DeriveSeed(seed, {108, rep});
    Exp3GppLearner learner(k, config);
    const std::uint64_t stream = DeriveSeed(seed, {109, rep});
    for (std::size_t t = 1; t <= horizon; ++t) {
      env.LossesAt(stream, t, losses);
      learner.Step(graph, losses);
      for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        if (checkpoints[c] != t) continue;
        const auto& delta_hat = learner.last_round().gaps.delta_hat;
        for (Arm i = 0; i < k; ++i) {
          if (delta_hat[i] >= floors[i]) ++exceed[c][i];
        }
      }
    }
  }

  Failure failure;
  const double n = static_cast<double>(replicates);
  double worst_ratio = 0.0;
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    const double t = static_cast<double>(checkpoints[c]);
    const double bound =
        1.0 / (static_cast<double>(k) * std::pow(t, base.gamma - 1.0));
    const double threshold = bound + 3.0 * std::sqrt(bound * (1.0 - bound) / n);
    for (Arm i = 0; i < k; ++i) {
      const double freq = static_cast<double>(exceed[c][i]) / n;
      worst_ratio = std::max(worst_ratio, freq / threshold);
      if (reports) {
        reports->push_back({checkpoints[c], i, exceed[c][i], replicates, bound,
                            threshold});
      }
      if (freq > threshold && !failure) {
        failure = fmt::format(
            "t = {}, arm {}: frequency {} exceeds {} (bound {})", checkpoints[c],
            i, freq, threshold, bound);
      }
    }
  }
  return Finish("gap-estimate upper concentration", clock, failure,
                fmt::format("{} replicates, max frequency/threshold = {:.3g}",
                            replicates, worst_ratio));
}

CheckOutcome VerifyDeterminism(std::uint64_t seed) {
  Stopwatch clock;
  ExperimentSpec spec;
  const auto graph = GenerateGraph({.family = GraphFamily::kErdosRenyi,
                                    .num_arms = 6,
                                    .edge_probability = 0.4,
                                    .directed = true},
                                   seed);
  spec.graphs = GraphSchedule::Fixed(graph);
  spec.environment = StochasticEnv({0.3, 0.5, 0.5, 0.6, 0.7, 0.5});
  LearnerSpec gpp{"exp3g++", Algorithm::kExp3GPlusPlus, {}};
  gpp.config = ResolveConfig(gpp.config, graph);
  spec.learners = {gpp, {"exp3", Algorithm::kExp3, {}}};
  spec.horizon = 2000;
  spec.replicates = 3;
  spec.seed = seed;

  auto render = [&](std::size_t threads) {
    RunOptions options;
    options.threads = threads;
    options.write_files = false;
    const auto result = RunExperiment(spec, options);
    std::ostringstream out;
    for (const auto& run : result.runs) WriteTraceCsv(out, run, false);
    WriteAggregateCsv(out, result);
    return out.str();
  };
  const std::string first = render(1);
  const std::string second = render(3);
  Failure failure;
  if (first != second) failure = "trace CSVs differ between identical runs";
  return Finish("determinism", clock, failure,
                fmt::format("{} bytes of trace output identical", first.size()));
}

std::vector<CheckOutcome> RunVerification(VerifyLevel level, std::uint64_t seed,
                                          std::ostream* log) {
  const bool full = level == VerifyLevel::kFull;
  std::vector<CheckOutcome> outcomes;
  auto record = [&](CheckOutcome outcome) {
    if (log) {
      *log << fmt::format("[{}] {} ({:.2f} s): {}\n",
                          outcome.passed ? "PASS" : "FAIL", outcome.name,
                          outcome.seconds, outcome.detail);
    }
    outcomes.push_back(std::move(outcome));
  };
  record(VerifyExplorationSets(500, 2, 12, seed));
  record(VerifyRunInvariants(10000, 10, full ? 12 : 3, seed));
  record(VerifyUnbiasedness(100, 10, seed));
  record(VerifyCombinatorialChain(200, 8, seed));
  record(VerifyDeterminism(seed));
  const std::size_t checkpoints[] = {200, 1000};
  record(VerifyGapConcentration(full ? 2000 : 200, checkpoints, seed));
  return outcomes;
}

}  // namespace graphbandit
