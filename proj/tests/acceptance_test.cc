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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "graphbandit/env.h"
#include "graphbandit/experiment_spec.h"
#include "graphbandit/harness.h"
#include "graphbandit/verify.h"

namespace gb = graphbandit;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Verdict {
  bool passed = false;
  std::string detail;
};

std::size_t IndexOfRound(const gb::ExperimentResult& result, std::size_t t) {
  for (std::size_t n = 0; n < result.rounds.size(); ++n) {
    if (result.rounds[n] == t) return n;
  }
  throw std::logic_error(fmt::format("round {} was not recorded", t));
}

double MeanAt(const gb::ExperimentResult& result, std::size_t learner,
              std::size_t t) {
  return result.curves.at(learner).mean[IndexOfRound(result, t)];
}

gb::ExperimentSpec CliquesSpec(const nlohmann::json& environment,
                               const nlohmann::json& learners) {
  const nlohmann::json j = {
      {"graph", {{"family", "cliques"}, {"params", {{"m", 2}, {"s", 5}}}}},
      {"environment", environment},
      {"learners", learners},
      {"horizon", 100000},
      {"replicates", 50},
      {"seed", kSeed},
  };
  return gb::ExperimentSpecFromJson(j, fs::temp_directory_path());
}

gb::RunOptions InMemory() {
  gb::RunOptions options;
  options.write_files = false;
  return options;
}

Verdict FromOutcome(const gb::CheckOutcome& outcome) {
  return {outcome.passed, outcome.detail};
}

Verdict ExplorationSets() {
  const auto outcome = gb::VerifyExplorationSets(500, 2, 12, kSeed);
  Verdict v = FromOutcome(outcome);
  if (outcome.seconds >= 10.0) {
    v.passed = false;
    v.detail += fmt::format("; took {:.1f} s", outcome.seconds);
  }
  return v;
}

Verdict RunInvariants() {
  return FromOutcome(gb::VerifyRunInvariants(10000, 10, 12, kSeed));
}

Verdict Unbiasedness() {
  return FromOutcome(gb::VerifyUnbiasedness(100, 12, kSeed));
}

Verdict Chain() { return FromOutcome(gb::VerifyCombinatorialChain(200, 8, kSeed)); }

Verdict AdversarialBound() {
  const auto spec = CliquesSpec(
      {{"type", "adversarial"}, {"generator", "uniform_iid"}},
      {{{"algorithm", "exp3g++"}}});
  const auto result = gb::RunExperiment(spec, InMemory());
  const double k = 10.0;
  const double horizon = 100000.0;
  const double alpha_tilde = 2.0;
  const double bound = 4.0 * std::sqrt(alpha_tilde * horizon * std::log(k)) + k;
  const double at_t = MeanAt(result, 0, 25000);
  const double at_4t = MeanAt(result, 0, 100000);
  const double ratio = at_4t / at_t;
  const bool passed = at_4t <= bound && ratio >= 1.6 && ratio <= 2.6;
  return {passed, fmt::format("regret(1e5) = {:.1f} <= {:.1f}, "
                              "regret(1e5)/regret(2.5e4) = {:.3f} in [1.6, 2.6]",
                              at_4t, bound, ratio)};
}

Verdict StochasticScaling() {
  std::vector<double> means(10, 0.5);
  means[0] = 0.25;
  const auto spec = CliquesSpec(
      {{"type", "stochastic"}, {"means", means}},
      {{{"algorithm", "exp3g++"}}, {{"algorithm", "exp3"}}});
  const auto result = gb::RunExperiment(spec, InMemory());
  const double gpp_t = MeanAt(result, 0, 25000);
  const double gpp_4t = MeanAt(result, 0, 100000);
  const double exp3_4t = MeanAt(result, 1, 100000);
  const double ratio = gpp_4t / gpp_t;
  const double improvement = 1.0 - gpp_4t / exp3_4t;
  const bool passed = ratio <= 1.8 && improvement >= 0.3;
  return {passed,
          fmt::format("regret(1e5)/regret(2.5e4) = {:.3f} <= 1.8, exp3g++ {:.1f} "
                      "vs exp3 {:.1f} ({:.0f}% lower, need 30%)",
                      ratio, gpp_4t, exp3_4t, 100.0 * improvement)};
}

Verdict Concentration() {
  const std::size_t checkpoints[] = {200, 1000};
  return FromOutcome(gb::VerifyGapConcentration(2000, checkpoints, kSeed));
}

Verdict TimeVarying() {
  const nlohmann::json j = {
      {"graph",
       {{"graphs",
         {{{"family", "bandit"}, {"params", {{"K", 8}}}},
          {{"family", "complete"}, {"params", {{"K", 8}}}}}},
        {"period", 1}}},
      {"environment", {{"type", "adversarial"}, {"generator", "uniform_iid"}}},
      {"learners", {{{"algorithm", "exp3g++"}, {"eta_mode", "time_varying"}}}},
      {"horizon", 100000},
      {"replicates", 50},
      {"seed", kSeed},
  };
  const auto spec = gb::ExperimentSpecFromJson(j, fs::temp_directory_path());
  const std::size_t k = 8;

  std::mutex mutex;
  std::vector<double> last_eta(spec.replicates, 0.0);
  std::atomic<std::size_t> increases{0};
  std::atomic<std::size_t> bad_seeds{0};
  double sum_alpha = 0.0;
  {
    gb::GraphCursor cursor;
    for (std::size_t t = 1; t <= spec.horizon; ++t) {
      sum_alpha += static_cast<double>(gb::IndependenceNumber(spec.graphs.At(t, cursor)));
    }
  }

  gb::RunOptions options = InMemory();
  options.observer = [&](const gb::RunContext& context, const gb::FeedbackGraph&,
                         const gb::Learner& learner, std::span<const double>) {
    const auto& record = learner.last_round();
    if (record.initialization) return;
    const auto& gpp = static_cast<const gb::Exp3GppLearner&>(learner);
    if (record.round == k + 1) {
      const double expected = std::sqrt(std::log(static_cast<double>(k)) / (2.0 * k));
      if (std::abs(record.eta - expected) > 1e-15 ||
          std::abs(gpp.theta_cumsum() - record.theta - static_cast<double>(k)) >
              1e-12) {
        ++bad_seeds;
      }
    }
    std::lock_guard<std::mutex> lock(mutex);
    double& previous = last_eta[context.replicate];
    if (record.round > k + 1 && record.eta > previous) ++increases;
    previous = record.eta;
  };
  const auto result = gb::RunExperiment(spec, options);
  const double regret = MeanAt(result, 0, spec.horizon);
  const double horizon = static_cast<double>(spec.horizon);
  const double bound = 9.0 * std::sqrt(std::log(8.0)) *
                           std::sqrt(std::log(8.0 * horizon)) * std::sqrt(sum_alpha) +
                       2.0 * k;
  const bool passed = increases == 0 && bad_seeds == 0 && regret <= bound;
  return {passed,
          fmt::format("eta increases = {}, seed mismatches = {}, regret(1e5) = "
                      "{:.1f} <= {:.1f} (sum alpha_t = {})",
                      increases.load(), bad_seeds.load(), regret, bound, sum_alpha)};
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Verdict Determinism() {
  const nlohmann::json j = {
      {"graph",
       {{"family", "erdos_renyi"},
        {"params", {{"K", 8}, {"p", 0.3}, {"directed", true}}},
        {"period", 50}}},
      {"environment", {{"type", "adversarial"}, {"generator", "bernoulli_iid"},
                       {"means", {0.3, 0.5, 0.5, 0.6, 0.4, 0.5, 0.7, 0.5}}}},
      {"learners", {{{"algorithm", "exp3g++"}}, {{"algorithm", "exp3"}}}},
      {"horizon", 5000},
      {"replicates", 4},
      {"seed", kSeed},
      {"dump_gaps", true},
  };
  const fs::path root =
      fs::temp_directory_path() / fmt::format("graphbandit_acceptance_{}", ::getpid());
  fs::remove_all(root);
  std::vector<fs::path> dirs{root / "a", root / "b", root / "c"};
  const std::size_t threads[] = {1, 1, 4};
  for (std::size_t n = 0; n < dirs.size(); ++n) {
    auto spec = gb::ExperimentSpecFromJson(j, root);
    spec.output_dir = dirs[n];
    gb::RunExperiment(spec, {.threads = threads[n]});
  }
  std::size_t files = 0;
  std::size_t bytes = 0;
  std::string mismatch;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    const auto name = entry.path().filename();
    if (name.extension() != ".csv") continue;
    const std::string reference = ReadFile(entry.path());
    ++files;
    bytes += reference.size();
    for (std::size_t n = 1; n < dirs.size(); ++n) {
      if (ReadFile(dirs[n] / name) != reference) mismatch = name.string();
    }
  }
  const auto in_memory = gb::VerifyDeterminism(kSeed);
  fs::remove_all(root);
  const bool passed = mismatch.empty() && files == 9 && in_memory.passed;
  return {passed, mismatch.empty()
                      ? fmt::format("{} CSV files ({} bytes) identical across 3 runs",
                                    files, bytes)
                      : fmt::format("{} differs", mismatch)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"exploration set exactness", ExplorationSets},
      {"distribution and mixing invariants", RunInvariants},
      {"estimator unbiasedness", Unbiasedness},
      {"combinatorial chain", Chain},
      {"adversarial regret bound and sqrt(T) scaling", AdversarialBound},
      {"stochastic scaling and baseline margin", StochasticScaling},
      {"gap estimate upper concentration", Concentration},
      {"time-varying graphs", TimeVarying},
      {"determinism", Determinism},
  };
  int failures = 0;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    const auto start = std::chrono::steady_clock::now();
    Verdict verdict;
    try {
      verdict = criteria[n].second();
    } catch (const std::exception& e) {
      verdict = {false, fmt::format("exception: {}", e.what())};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << fmt::format("{} criterion {} ({}) [{:.1f} s]: {}\n",
                             verdict.passed ? "PASS" : "FAIL", n + 1,
                             criteria[n].first, seconds, verdict.detail)
              << std::flush;
    failures += verdict.passed ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
