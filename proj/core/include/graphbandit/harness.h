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

#ifndef GRAPHBANDIT_HARNESS_H_
#define GRAPHBANDIT_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphbandit/experiment_spec.h"
#include "graphbandit/learner.h"

namespace graphbandit {

struct TracePoint {
  std::size_t t = 0;
  Arm arm = 0;
  double loss = 0.0;
  double cumulative_loss = 0.0;
  double regret = 0.0;
  // Filled only when the spec asks for gap columns.
  std::vector<double> delta_hat;
};

struct RunResult {
  std::size_t learner = 0;
  std::size_t replicate = 0;
  std::uint64_t learner_seed = 0;
  std::uint64_t env_seed = 0;
  std::vector<TracePoint> trace;
};

struct RegretCurve {
  std::string learner;
  std::vector<double> mean;
  std::vector<double> standard_error;
};

struct ExperimentResult {
  std::string config_hash;
  // Recorded rounds, shared by every curve.
  std::vector<std::size_t> rounds;
  std::vector<RegretCurve> curves;
  // Ordered by (learner, replicate).
  std::vector<RunResult> runs;
};

struct RunContext {
  std::size_t learner = 0;
  std::size_t replicate = 0;
};

// Called after every round of every run. Runs execute on worker threads,
// so the observer must be thread-safe when more than one thread is used.
using RoundObserver =
    std::function<void(const RunContext& context, const FeedbackGraph& graph,
                        const Learner& learner, std::span<const double> losses)>;

struct RunOptions {
  // Overrides spec.threads and GRAPHBANDIT_THREADS.
  std::optional<std::size_t> threads;
  bool write_files = true;
  RoundObserver observer;
};

// Explicit request, then GRAPHBANDIT_THREADS, then hardware concurrency.
std::size_t ResolveThreadCount(std::optional<std::size_t> requested);

// Seeds are a function of (master seed, replicate, learner) only.
std::uint64_t EnvironmentSeed(const ExperimentSpec& spec, std::size_t replicate);
std::uint64_t LearnerSeed(const ExperimentSpec& spec, std::size_t replicate,
                          std::size_t learner);

std::unique_ptr<Learner> MakeLearner(const ExperimentSpec& spec,
                                     std::size_t learner,
                                     std::size_t replicate);

// One run of one learner. `exploration_log` receives the sidecar rows when
// non-null.
RunResult RunReplicate(const ExperimentSpec& spec, std::size_t learner,
                       std::size_t replicate,
                       const RoundObserver& observer = {},
                       std::ostream* exploration_log = nullptr);

// All learners x replicates over a worker pool, then a single-threaded
// reduce. When write_files is set, writes into spec.output_dir:
//   <learner>_r<replicate>.csv   per-run trace
//   <learner>_r<replicate>_exploration.csv   (dump_exploration only)
//   aggregate.csv   t plus mean_regret / stderr per learner
//   metadata.json   spec, config hash, graph stats, run seeds
// Any exception inside a run fails the experiment with the run named.
ExperimentResult RunExperiment(const ExperimentSpec& spec,
                               const RunOptions& options = {});

void WriteTraceCsv(std::ostream& out, const RunResult& run, bool with_gaps);
void WriteAggregateCsv(std::ostream& out, const ExperimentResult& result);
nlohmann::json ExperimentMetadata(const ExperimentSpec& spec,
                                  const ExperimentResult& result);

std::string TraceFileName(const ExperimentSpec& spec, const RunResult& run);

}  // namespace graphbandit

#endif  // GRAPHBANDIT_HARNESS_H_
