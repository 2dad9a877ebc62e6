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

#include <vector>

#include <benchmark/benchmark.h>

#include "graphbandit/env.h"
#include "graphbandit/explore.h"
#include "graphbandit/graph.h"
#include "graphbandit/learner.h"
#include "graphbandit/rng.h"
#include "graphbandit/verify.h"

namespace gb = graphbandit;

namespace {

gb::FeedbackGraph ErdosRenyi(std::size_t k, double p, bool directed,
                             std::uint64_t seed) {
  return gb::GenerateGraph({.family = gb::GraphFamily::kErdosRenyi,
                            .num_arms = k,
                            .edge_probability = p,
                            .directed = directed},
                           seed);
}

void BM_IndependenceNumber(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  std::vector<gb::FeedbackGraph> corpus;
  for (std::uint64_t s = 0; s < 16; ++s) corpus.push_back(ErdosRenyi(k, 0.3, false, s));
  std::size_t n = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gb::IndependenceNumber(corpus[n++ % corpus.size()]));
  }
}
BENCHMARK(BM_IndependenceNumber)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

void BM_StrongIndependenceNumber(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  std::vector<gb::FeedbackGraph> corpus;
  for (std::uint64_t s = 0; s < 16; ++s) corpus.push_back(ErdosRenyi(k, 0.4, true, s));
  std::size_t n = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gb::StrongIndependenceNumber(corpus[n++ % corpus.size()]));
  }
}
BENCHMARK(BM_StrongIndependenceNumber)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

void BM_MaximumAcyclicSubgraph(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto g = ErdosRenyi(k, 0.3, true, 7);
  for (auto _ : state) benchmark::DoNotOptimize(gb::MaximumAcyclicSubgraph(g));
}
BENCHMARK(BM_MaximumAcyclicSubgraph)->Arg(6)->Arg(8)->Arg(10);

void BM_BuildExplorationSet(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto g = ErdosRenyi(k, 0.2, true, 11);
  gb::Rng rng(3);
  const auto gaps = gb::RandomGaps(rng, k);
  for (auto _ : state) benchmark::DoNotOptimize(gb::BuildExplorationSet(g, gaps));
}
BENCHMARK(BM_BuildExplorationSet)->Arg(10)->Arg(100)->Arg(1000);

void BM_Exp3GppStep(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto g = ErdosRenyi(k, 0.3, false, 5);
  gb::LearnerConfig config;
  config.alpha_tilde = k / 4;
  config = gb::ResolveConfig(config, g);
  gb::Exp3GppLearner learner(k, config);
  std::vector<double> means(k, 0.5);
  means[0] = 0.3;
  const gb::StochasticEnv env(means);
  std::vector<double> losses(k);
  std::size_t t = 0;
  for (auto _ : state) {
    env.LossesAt(1, ++t, losses);
    learner.Step(g, losses);
  }
}
BENCHMARK(BM_Exp3GppStep)->Arg(10)->Arg(100)->Arg(1000);

void BM_Exp3Step(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto g = gb::FeedbackGraph::Bandit(k);
  gb::Exp3Learner learner(k, 9);
  std::vector<double> losses(k, 0.5);
  for (auto _ : state) learner.Step(g, losses);
}
BENCHMARK(BM_Exp3Step)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
