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

#include "graphbandit/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "graphbandit/rng.h"

namespace graphbandit {
namespace {

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  }
  return out;
}

void WriteExplorationRow(std::ostream& out, const RoundRecord& r) {
  out << r.round << ',';
  for (std::size_t n = 0; n < r.exploration_set.size(); ++n) {
    out << (n ? " " : "") << r.exploration_set[n];
  }
  for (double eps : r.epsilon) out << fmt::format(",{}", eps);
  out << '\n';
}

}  // namespace

std::size_t ResolveThreadCount(std::optional<std::size_t> requested) {
  if (requested && *requested > 0) return *requested;
  if (const char* env = std::getenv("GRAPHBANDIT_THREADS")) {
    char* end = nullptr;
    const unsigned long value = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t EnvironmentSeed(const ExperimentSpec& spec,
                              std::size_t replicate) {
  if (const auto* a = std::get_if<AdversarialEnv>(&spec.environment);
      a && a->shared_sequence) {
    return DeriveSeed(spec.seed, {0});
  }
  return DeriveSeed(spec.seed, {0, replicate});
}

std::uint64_t LearnerSeed(const ExperimentSpec& spec, std::size_t replicate,
                          std::size_t learner) {
  return DeriveSeed(spec.seed, {1, replicate, learner});
}

std::unique_ptr<Learner> MakeLearner(const ExperimentSpec& spec,
                                     std::size_t learner,
                                     std::size_t replicate) {
  const LearnerSpec& ls = spec.learners.at(learner);
  const std::uint64_t seed = LearnerSeed(spec, replicate, learner);
  const std::size_t k = spec.graphs.num_arms();
  if (ls.algorithm == Algorithm::kExp3) {
    return std::make_unique<Exp3Learner>(k, seed);
  }
  LearnerConfig config = ls.config;
  config.seed = seed;
  return std::make_unique<Exp3GppLearner>(k, config);
}

RunResult RunReplicate(const ExperimentSpec& spec, std::size_t learner,
                       std::size_t replicate, const RoundObserver& observer,
                       std::ostream* exploration_log) {
  const std::size_t k = spec.graphs.num_arms();
  const std::size_t horizon = spec.horizon;
  const std::size_t stride = EffectiveStride(spec);

  RunResult run;
  run.learner = learner;
  run.replicate = replicate;
  run.learner_seed = LearnerSeed(spec, replicate, learner);
  run.env_seed = EnvironmentSeed(spec, replicate);
  run.trace.reserve(horizon / stride + 2);

  auto player = MakeLearner(spec, learner, replicate);
  const auto* stochastic = std::get_if<StochasticEnv>(&spec.environment);
  std::optional<LossSequence> sequence;
  if (!stochastic) {
    sequence = std::get<AdversarialEnv>(spec.environment)
                   .Materialize(horizon, run.env_seed);
  }
  RegretAccumulator regret =
      stochastic ? RegretAccumulator(stochastic->Gaps()) : RegretAccumulator(k);

  if (exploration_log) {
    *exploration_log << "t,exploration_set";
    for (std::size_t i = 0; i < k; ++i) *exploration_log << ",eps_" << i;
    *exploration_log << '\n';
  }

  const RunContext context{learner, replicate};
  GraphCursor cursor;
  std::vector<double> losses(k);
  double cumulative_loss = 0.0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    if (stochastic) {
      stochastic->LossesAt(run.env_seed, t, losses);
    } else {
      const auto row = sequence->LossesAt(t);
      std::copy(row.begin(), row.end(), losses.begin());
    }
    const FeedbackGraph& graph = spec.graphs.At(t, cursor);
    const Arm arm = player->Step(graph, losses);
    const RoundRecord& record = player->last_round();
    regret.Add(record.p, losses);
    cumulative_loss += losses[arm];

    if (observer) observer(context, graph, *player, losses);
    if (exploration_log && !record.initialization) {
      WriteExplorationRow(*exploration_log, record);
    }
    if (t % stride == 0 || t == horizon) {
      TracePoint point{t, arm, losses[arm], cumulative_loss, regret.regret(), {}};
      if (spec.dump_gaps) {
        point.delta_hat = record.gaps.delta_hat;
        point.delta_hat.resize(k, 0.0);
      }
      run.trace.push_back(std::move(point));
    }
  }
  return run;
}

std::string TraceFileName(const ExperimentSpec& spec, const RunResult& run) {
  return fmt::format("{}_r{}.csv", spec.learners.at(run.learner).name,
                     run.replicate);
}

ExperimentResult RunExperiment(const ExperimentSpec& spec,
                               const RunOptions& options) {
  ValidateSpec(spec);
  const std::size_t num_learners = spec.learners.size();
  const std::size_t jobs = num_learners * spec.replicates;
  const std::size_t threads = std::min(
      jobs, ResolveThreadCount(options.threads ? options.threads : spec.threads));

  if (options.write_files) std::filesystem::create_directories(spec.output_dir);

  ExperimentResult result;
  result.config_hash = ConfigHash(spec);
  result.runs.resize(jobs);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::string error_context;

  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const std::size_t learner = job / spec.replicates;
      const std::size_t replicate = job % spec.replicates;
      try {
        std::ofstream sidecar;
        if (options.write_files && spec.dump_exploration) {
          sidecar = OpenForWrite(
              spec.output_dir /
              fmt::format("{}_r{}_exploration.csv",
                          spec.learners[learner].name, replicate));
        }
        result.runs[job] =
            RunReplicate(spec, learner, replicate, options.observer,
                         sidecar.is_open() ? &sidecar : nullptr);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) {
          error = std::current_exception();
          error_context = fmt::format("learner \"{}\" replicate {}",
                                      spec.learners[learner].name, replicate);
        }
        next = jobs;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t n = 0; n < threads; ++n) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const std::exception& e) {
      throw std::runtime_error(
          fmt::format("run failed ({}): {}", error_context, e.what()));
    }
  }

  for (const auto& point : result.runs.front().trace) {
    result.rounds.push_back(point.t);
  }
  const double reps = static_cast<double>(spec.replicates);
  for (std::size_t l = 0; l < num_learners; ++l) {
    RegretCurve curve;
    curve.learner = spec.learners[l].name;
    curve.mean.assign(result.rounds.size(), 0.0);
    curve.standard_error.assign(result.rounds.size(), 0.0);
    for (std::size_t n = 0; n < result.rounds.size(); ++n) {
      double sum = 0.0;
      for (std::size_t r = 0; r < spec.replicates; ++r) {
        sum += result.runs[l * spec.replicates + r].trace[n].regret;
      }
      const double mean = sum / reps;
      double squares = 0.0;
      for (std::size_t r = 0; r < spec.replicates; ++r) {
        const double d = result.runs[l * spec.replicates + r].trace[n].regret - mean;
        squares += d * d;
      }
      curve.mean[n] = mean;
      curve.standard_error[n] =
          spec.replicates > 1 ? std::sqrt(squares / (reps - 1.0) / reps) : 0.0;
    }
    result.curves.push_back(std::move(curve));
  }

  if (options.write_files) {
    for (const auto& run : result.runs) {
      auto out = OpenForWrite(spec.output_dir / TraceFileName(spec, run));
      WriteTraceCsv(out, run, spec.dump_gaps);
    }
    auto aggregate = OpenForWrite(spec.output_dir / "aggregate.csv");
    WriteAggregateCsv(aggregate, result);
    auto metadata = OpenForWrite(spec.output_dir / "metadata.json");
    metadata << ExperimentMetadata(spec, result).dump(2) << '\n';
  }
  return result;
}

void WriteTraceCsv(std::ostream& out, const RunResult& run, bool with_gaps) {
  out << "t,arm,loss,cumulative_loss,regret";
  if (with_gaps && !run.trace.empty()) {
    for (std::size_t i = 0; i < run.trace.front().delta_hat.size(); ++i) {
      out << ",delta_hat_" << i;
    }
  }
  out << '\n';
  for (const auto& p : run.trace) {
    out << fmt::format("{},{},{},{},{}", p.t, p.arm, p.loss, p.cumulative_loss,
                       p.regret);
    if (with_gaps) {
      for (double d : p.delta_hat) out << fmt::format(",{}", d);
    }
    out << '\n';
  }
}

void WriteAggregateCsv(std::ostream& out, const ExperimentResult& result) {
  out << 't';
  for (const auto& c : result.curves) {
    out << ',' << c.learner << ".mean_regret," << c.learner << ".stderr";
  }
  out << '\n';
  for (std::size_t n = 0; n < result.rounds.size(); ++n) {
    out << result.rounds[n];
    for (const auto& c : result.curves) {
      out << fmt::format(",{},{}", c.mean[n], c.standard_error[n]);
    }
    out << '\n';
  }
}

nlohmann::json ExperimentMetadata(const ExperimentSpec& spec,
                                  const ExperimentResult& result) {
  nlohmann::json j;
  j["config_hash"] = result.config_hash;
  j["spec"] = ExperimentSpecToJson(spec);
  j["regret"] = std::holds_alternative<StochasticEnv>(spec.environment)
                    ? "sum_t sum_i p_ti * gap_i"
                    : "sum_t <p_t, l_t> - min_i sum_t l_ti";
  if (spec.graphs.is_fixed() && spec.graphs.num_arms() <= kIndependenceCap) {
    GraphCursor cursor;
    j["graph_stats"] = GraphStatsToJson(ComputeGraphStats(spec.graphs.At(1, cursor)));
  } else {
    j["graph_stats"] = nullptr;
  }
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& run : result.runs) {
    runs.push_back({{"learner", spec.learners[run.learner].name},
                    {"replicate", run.replicate},
                    {"learner_seed", run.learner_seed},
                    {"env_seed", run.env_seed},
                    {"trace", TraceFileName(spec, run)}});
  }
  j["runs"] = runs;
  return j;
}

}  // namespace graphbandit
