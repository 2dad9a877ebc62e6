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

#ifndef GRAPHBANDIT_ENV_H_
#define GRAPHBANDIT_ENV_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "graphbandit/graph.h"

namespace graphbandit {

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

enum class NoiseKind {
  kBernoulli,
  // Uniform on [mean - h, mean + h] with h = min(width / 2, mean, 1 - mean),
  // so the mean is preserved and losses stay in [0, 1].
  kUniformBand,
};

// I.i.d. losses with fixed per-arm means.
class StochasticEnv {
 public:
  explicit StochasticEnv(std::vector<double> means,
                         NoiseKind noise = NoiseKind::kBernoulli,
                         double band_width = 0.0);

  std::size_t num_arms() const { return means_.size(); }
  const std::vector<double>& means() const { return means_; }
  NoiseKind noise() const { return noise_; }
  double band_width() const { return band_width_; }

  // Full loss vector of round t >= 1; a pure function of (stream, t).
  void LossesAt(std::uint64_t stream, std::size_t t,
                std::span<double> out) const;

  Arm BestArm() const;
  // Delta_i = mean_i - mean_best.
  std::vector<double> Gaps() const;
  // Smallest positive gap; 0 when every arm is optimal.
  double MinGap() const;
  // max(Delta_min, Delta_i).
  std::vector<double> GapFloors() const;

 private:
  std::vector<double> means_;
  NoiseKind noise_;
  double band_width_;
};

// An oblivious loss sequence, fully materialized before play. Row t-1 holds
// the K losses of round t.
class LossSequence {
 public:
  LossSequence(std::size_t num_arms, std::vector<double> values);

  // One row per round, K comma-separated reals in [0, 1]. Rows beyond
  // `horizon` are ignored; fewer rows is a std::length_error. Malformed
  // rows raise std::runtime_error naming the line.
  static LossSequence FromCsv(std::istream& in, std::size_t horizon,
                              std::optional<std::size_t> num_arms = {});
  static LossSequence FromCsvFile(const std::filesystem::path& path,
                                  std::size_t horizon,
                                  std::optional<std::size_t> num_arms = {});

  std::size_t num_arms() const { return num_arms_; }
  std::size_t horizon() const { return values_.size() / num_arms_; }
  std::span<const double> LossesAt(std::size_t t) const {
    return {values_.data() + (t - 1) * num_arms_, num_arms_};
  }

  bool operator==(const LossSequence&) const = default;

 private:
  std::size_t num_arms_;
  std::vector<double> values_;
};

LossSequence UniformIidSequence(std::size_t num_arms, std::size_t horizon,
                                std::uint64_t seed);
LossSequence BernoulliIidSequence(const std::vector<double>& means,
                                  std::size_t horizon, std::uint64_t seed);
// Bernoulli losses whose best and worst arms exchange means at round
// floor(T / 2) + 1.
LossSequence StochasticThenFlipSequence(const std::vector<double>& means,
                                        std::size_t horizon,
                                        std::uint64_t seed);

struct AdversarialEnv {
  enum class Source { kFile, kUniformIid, kBernoulliIid, kStochasticThenFlip };

  Source source = Source::kUniformIid;
  std::size_t num_arms = 0;
  std::filesystem::path file;
  std::vector<double> means;
  // Use one sequence for every replicate instead of one per replicate.
  // File sources are always shared.
  bool shared_sequence = false;

  LossSequence Materialize(std::size_t horizon, std::uint64_t seed) const;
};

using Environment = std::variant<AdversarialEnv, StochasticEnv>;

std::size_t NumArms(const Environment& env);

// ---------------------------------------------------------------------------
// Regret
// ---------------------------------------------------------------------------

// sum_t Delta_{I_t}.
double PseudoRegret(std::span<const Arm> arms, const StochasticEnv& env);
// sum_t l_{t,I_t} - min_i sum_t l_{t,i} over the first arms.size() rounds.
double PseudoRegret(std::span<const Arm> arms, const LossSequence& losses);

// Running pseudo-regret fed with the learner's sampling distribution each
// round. Stochastic: sum_t sum_i p_{t,i} Delta_i. Adversarial:
// sum_t <p_t, l_t> - min_i sum_t l_{t,i}. Both are the conditional
// expectations of the played-arm forms above.
class RegretAccumulator {
 public:
  // Stochastic mode.
  explicit RegretAccumulator(std::vector<double> gaps);
  // Adversarial mode.
  explicit RegretAccumulator(std::size_t num_arms);

  void Add(std::span<const double> p, std::span<const double> losses);
  double regret() const;

 private:
  bool stochastic_;
  std::vector<double> gaps_;
  std::vector<double> arm_totals_;
  double learner_total_ = 0.0;
  double gap_total_ = 0.0;
};

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

enum class GraphFamily { kBandit, kComplete, kErdosRenyi, kStar, kCliques, kCycle };

struct GraphFamilyParams {
  GraphFamily family = GraphFamily::kBandit;
  // Ignored for kCliques, where K = clique_count * clique_size.
  std::size_t num_arms = 0;
  double edge_probability = 0.5;  // kErdosRenyi
  bool directed = false;          // kErdosRenyi, kStar, kCycle
  std::size_t clique_count = 0;   // kCliques
  std::size_t clique_size = 0;    // kCliques
};

std::string GraphFamilyName(GraphFamily family);
GraphFamily ParseGraphFamily(const std::string& name);

// {"family": name, "params": {"K": .., "p": .., "directed": .., "m": ..,
// "s": ..}}. Throws std::domain_error on unknown families or bad params.
GraphFamilyParams GraphFamilyFromJson(const nlohmann::json& j);
nlohmann::json GraphFamilyToJson(const GraphFamilyParams& params);

// Deterministic in seed. Throws std::domain_error for invalid params.
FeedbackGraph GenerateGraph(const GraphFamilyParams& params,
                            std::uint64_t seed);

// Per-run scratch state for GraphSchedule::At.
struct GraphCursor {
  std::optional<FeedbackGraph> graph;
  std::size_t block = static_cast<std::size_t>(-1);
};

// The graph played at each round, chosen obliviously before play.
class GraphSchedule {
 public:
  // Empty schedule (K = 0); only useful as a placeholder before assignment.
  GraphSchedule() = default;

  static GraphSchedule Fixed(FeedbackGraph graph);
  // graphs[b mod n] is used during block b, each block lasting `period`
  // rounds.
  static GraphSchedule Periodic(std::vector<FeedbackGraph> graphs,
                                std::size_t period = 1);
  // A fresh graph from `params` every `period` rounds, seeded by
  // (seed, block).
  static GraphSchedule Random(GraphFamilyParams params, std::uint64_t seed,
                              std::size_t period = 1);

  bool is_fixed() const { return kind_ == Kind::kFixed; }
  std::size_t num_arms() const { return num_arms_; }

  // Graph of round t >= 1. The reference may point into `cursor`.
  const FeedbackGraph& At(std::size_t t, GraphCursor& cursor) const;

  nlohmann::json ToJson() const;

 private:
  enum class Kind { kFixed, kPeriodic, kRandom };
  GraphSchedule(Kind kind, std::size_t num_arms)
      : kind_(kind), num_arms_(num_arms) {}

  Kind kind_ = Kind::kFixed;
  std::size_t num_arms_ = 0;
  std::vector<FeedbackGraph> graphs_;
  std::size_t period_ = 1;
  GraphFamilyParams family_;
  std::uint64_t seed_ = 0;
};

// Graph object: {"K", "edges"} | {"file": path} | {"family", "params",
// "seed"?}. Schedule: a graph object (fixed), a list of graph objects
// (cycled each round), {"graphs": [...], "period": n}, or {"family",
// "params", "period": n} for a fresh random graph every n rounds. A bare
// string is a path to a graph file or to a JSON schedule file. Relative
// paths resolve against base_dir.
FeedbackGraph GraphObjectFromJson(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir,
                                  std::uint64_t seed);
GraphSchedule GraphScheduleFromJson(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir,
                                    std::uint64_t seed);

}  // namespace graphbandit

#endif  // GRAPHBANDIT_ENV_H_
