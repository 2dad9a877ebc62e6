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

#include "graphbandit/env.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include <fmt/format.h>

#include "graphbandit/rng.h"

namespace graphbandit {
namespace {

void CheckUnit(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::domain_error(fmt::format("{} {} is outside [0, 1]", what, value));
  }
}

std::size_t IndexOfMin(std::span<const double> values) {
  return static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
}

std::size_t IndexOfMax(std::span<const double> values) {
  return static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
}

void BernoulliRow(const std::vector<double>& means, std::uint64_t key,
                  std::size_t t, std::span<double> out) {
  const std::size_t k = means.size();
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = UniformAt(key, t * k + i) < means[i] ? 1.0 : 0.0;
  }
}

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& path) {
  std::filesystem::path p(path);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

StochasticEnv::StochasticEnv(std::vector<double> means, NoiseKind noise,
                             double band_width)
    : means_(std::move(means)), noise_(noise), band_width_(band_width) {
  if (means_.size() < 2) {
    throw std::domain_error("a stochastic environment needs at least 2 arms");
  }
  for (double m : means_) CheckUnit(m, "mean");
  if (noise_ == NoiseKind::kUniformBand && !(band_width_ >= 0.0)) {
    throw std::domain_error("uniform band width must be >= 0");
  }
}

void StochasticEnv::LossesAt(std::uint64_t stream, std::size_t t,
                             std::span<double> out) const {
  if (noise_ == NoiseKind::kBernoulli) {
    BernoulliRow(means_, stream, t, out);
    return;
  }
  const std::size_t k = means_.size();
  for (std::size_t i = 0; i < k; ++i) {
    const double m = means_[i];
    const double half = std::min({band_width_ / 2.0, m, 1.0 - m});
    const double u = UniformAt(stream, t * k + i);
    out[i] = std::clamp(m + (2.0 * u - 1.0) * half, 0.0, 1.0);
  }
}

Arm StochasticEnv::BestArm() const { return IndexOfMin(means_); }

std::vector<double> StochasticEnv::Gaps() const {
  const double best = means_[BestArm()];
  std::vector<double> gaps(means_.size());
  for (std::size_t i = 0; i < means_.size(); ++i) gaps[i] = means_[i] - best;
  return gaps;
}

double StochasticEnv::MinGap() const {
  double min_gap = std::numeric_limits<double>::infinity();
  for (double g : Gaps()) {
    if (g > 0.0) min_gap = std::min(min_gap, g);
  }
  return std::isinf(min_gap) ? 0.0 : min_gap;
}

std::vector<double> StochasticEnv::GapFloors() const {
  const double min_gap = MinGap();
  auto gaps = Gaps();
  for (double& g : gaps) g = std::max(min_gap, g);
  return gaps;
}

LossSequence::LossSequence(std::size_t num_arms, std::vector<double> values)
    : num_arms_(num_arms), values_(std::move(values)) {
  if (num_arms_ < 2) {
    throw std::domain_error("a loss sequence needs at least 2 arms");
  }
  if (values_.size() % num_arms_ != 0) {
    throw std::invalid_argument("loss table is not a whole number of rows");
  }
  for (double v : values_) CheckUnit(v, "loss");
}

LossSequence LossSequence::FromCsv(std::istream& in, std::size_t horizon,
                                   std::optional<std::size_t> num_arms) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  while (rows < horizon && std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream fields(line);
    std::string cell;
    std::size_t width = 0;
    while (std::getline(fields, cell, ',')) {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 ||
          cell.find_first_not_of(" \t\r", used) != std::string::npos) {
        throw std::runtime_error(
            fmt::format("loss file line {}: bad number \"{}\"", line_no, cell));
      }
      if (!(value >= 0.0 && value <= 1.0)) {
        throw std::domain_error(fmt::format(
            "loss file line {}: loss {} outside [0, 1]", line_no, value));
      }
      values.push_back(value);
      ++width;
    }
    if (!num_arms) num_arms = width;
    if (width != *num_arms) {
      throw std::runtime_error(fmt::format(
          "loss file line {}: expected {} losses, got {}", line_no, *num_arms,
          width));
    }
    ++rows;
  }
  if (rows < horizon) {
    throw std::length_error(fmt::format(
        "loss file has {} rounds but the horizon is {}", rows, horizon));
  }
  return LossSequence(num_arms.value_or(0), std::move(values));
}

LossSequence LossSequence::FromCsvFile(const std::filesystem::path& path,
                                       std::size_t horizon,
                                       std::optional<std::size_t> num_arms) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(
        fmt::format("cannot open loss file {}", path.string()));
  }
  return FromCsv(in, horizon, num_arms);
}

LossSequence UniformIidSequence(std::size_t num_arms, std::size_t horizon,
                                std::uint64_t seed) {
  std::vector<double> values(num_arms * horizon);
  for (std::size_t n = 0; n < values.size(); ++n) {
    values[n] = UniformAt(seed, n);
  }
  return LossSequence(num_arms, std::move(values));
}

LossSequence BernoulliIidSequence(const std::vector<double>& means,
                                  std::size_t horizon, std::uint64_t seed) {
  for (double m : means) CheckUnit(m, "mean");
  const std::size_t k = means.size();
  std::vector<double> values(k * horizon);
  for (std::size_t t = 1; t <= horizon; ++t) {
    BernoulliRow(means, seed, t, {values.data() + (t - 1) * k, k});
  }
  return LossSequence(k, std::move(values));
}

LossSequence StochasticThenFlipSequence(const std::vector<double>& means,
                                        std::size_t horizon,
                                        std::uint64_t seed) {
  for (double m : means) CheckUnit(m, "mean");
  auto flipped = means;
  std::swap(flipped[IndexOfMin(means)], flipped[IndexOfMax(means)]);
  const std::size_t k = means.size();
  std::vector<double> values(k * horizon);
  for (std::size_t t = 1; t <= horizon; ++t) {
    BernoulliRow(t <= horizon / 2 ? means : flipped, seed, t,
                 {values.data() + (t - 1) * k, k});
  }
  return LossSequence(k, std::move(values));
}

LossSequence AdversarialEnv::Materialize(std::size_t horizon,
                                         std::uint64_t seed) const {
  switch (source) {
    case Source::kFile:
      return LossSequence::FromCsvFile(file, horizon,
                                       num_arms ? std::optional(num_arms)
                                                : std::nullopt);
    case Source::kUniformIid:
      return UniformIidSequence(num_arms, horizon, seed);
    case Source::kBernoulliIid:
      return BernoulliIidSequence(means, horizon, seed);
    case Source::kStochasticThenFlip:
      return StochasticThenFlipSequence(means, horizon, seed);
  }
  throw std::logic_error("unknown adversarial source");
}

std::size_t NumArms(const Environment& env) {
  return std::visit(
      [](const auto& e) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(e)>, StochasticEnv>) {
          return e.num_arms();
        } else {
          return e.num_arms;
        }
      },
      env);
}

double PseudoRegret(std::span<const Arm> arms, const StochasticEnv& env) {
  const auto gaps = env.Gaps();
  double regret = 0.0;
  for (Arm a : arms) regret += gaps.at(a);
  return regret;
}

double PseudoRegret(std::span<const Arm> arms, const LossSequence& losses) {
  if (arms.size() > losses.horizon()) {
    throw std::length_error("trace is longer than the loss sequence");
  }
  std::vector<double> totals(losses.num_arms(), 0.0);
  double learner = 0.0;
  for (std::size_t t = 1; t <= arms.size(); ++t) {
    const auto row = losses.LossesAt(t);
    learner += row[arms[t - 1]];
    for (std::size_t i = 0; i < row.size(); ++i) totals[i] += row[i];
  }
  return learner - *std::min_element(totals.begin(), totals.end());
}

RegretAccumulator::RegretAccumulator(std::vector<double> gaps)
    : stochastic_(true), gaps_(std::move(gaps)) {}

RegretAccumulator::RegretAccumulator(std::size_t num_arms)
    : stochastic_(false), arm_totals_(num_arms, 0.0) {}

void RegretAccumulator::Add(std::span<const double> p,
                            std::span<const double> losses) {
  if (stochastic_) {
    for (std::size_t i = 0; i < p.size(); ++i) gap_total_ += p[i] * gaps_[i];
    return;
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    learner_total_ += p[i] * losses[i];
    arm_totals_[i] += losses[i];
  }
}

double RegretAccumulator::regret() const {
  if (stochastic_) return gap_total_;
  return learner_total_ -
         *std::min_element(arm_totals_.begin(), arm_totals_.end());
}

std::string GraphFamilyName(GraphFamily family) {
  switch (family) {
    case GraphFamily::kBandit: return "bandit";
    case GraphFamily::kComplete: return "complete";
    case GraphFamily::kErdosRenyi: return "erdos_renyi";
    case GraphFamily::kStar: return "star";
    case GraphFamily::kCliques: return "cliques";
    case GraphFamily::kCycle: return "cycle";
  }
  return "unknown";
}

GraphFamily ParseGraphFamily(const std::string& name) {
  for (auto f : {GraphFamily::kBandit, GraphFamily::kComplete,
                 GraphFamily::kErdosRenyi, GraphFamily::kStar,
                 GraphFamily::kCliques, GraphFamily::kCycle}) {
    if (GraphFamilyName(f) == name) return f;
  }
  throw std::domain_error(fmt::format("unknown graph family \"{}\"", name));
}

GraphFamilyParams GraphFamilyFromJson(const nlohmann::json& j) {
  GraphFamilyParams params;
  params.family = ParseGraphFamily(j.at("family").get<std::string>());
  const nlohmann::json p = j.value("params", nlohmann::json::object());
  params.num_arms = p.value("K", std::size_t{0});
  params.edge_probability = p.value("p", 0.5);
  params.directed = p.value("directed", false);
  params.clique_count = p.value("m", std::size_t{0});
  params.clique_size = p.value("s", std::size_t{0});
  return params;
}

nlohmann::json GraphFamilyToJson(const GraphFamilyParams& params) {
  nlohmann::json p;
  switch (params.family) {
    case GraphFamily::kCliques:
      p = {{"m", params.clique_count}, {"s", params.clique_size}};
      break;
    case GraphFamily::kErdosRenyi:
      p = {{"K", params.num_arms},
           {"p", params.edge_probability},
           {"directed", params.directed}};
      break;
    case GraphFamily::kStar:
    case GraphFamily::kCycle:
      p = {{"K", params.num_arms}, {"directed", params.directed}};
      break;
    default:
      p = {{"K", params.num_arms}};
  }
  return {{"family", GraphFamilyName(params.family)}, {"params", p}};
}

FeedbackGraph GenerateGraph(const GraphFamilyParams& params,
                            std::uint64_t seed) {
  const std::size_t k = params.family == GraphFamily::kCliques
                            ? params.clique_count * params.clique_size
                            : params.num_arms;
  if (k < 2) {
    throw std::domain_error(fmt::format(
        "{} graph needs at least 2 arms, got {}", GraphFamilyName(params.family),
        k));
  }
  std::vector<Edge> edges;
  auto add = [&](Arm u, Arm v, bool both) {
    edges.emplace_back(u, v);
    if (both) edges.emplace_back(v, u);
  };
  switch (params.family) {
    case GraphFamily::kBandit:
      break;
    case GraphFamily::kComplete:
      return FeedbackGraph::Complete(k);
    case GraphFamily::kErdosRenyi: {
      const double p = params.edge_probability;
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error(fmt::format("edge probability {} outside [0, 1]", p));
      }
      Rng rng(seed);
      for (Arm u = 0; u < k; ++u) {
        for (Arm v = params.directed ? 0 : u + 1; v < k; ++v) {
          if (u == v) continue;
          if (rng.Uniform() < p) add(u, v, !params.directed);
        }
      }
      break;
    }
    case GraphFamily::kStar:
      for (Arm v = 1; v < k; ++v) add(0, v, !params.directed);
      break;
    case GraphFamily::kCliques:
      if (params.clique_count < 1 || params.clique_size < 1) {
        throw std::domain_error("cliques needs m >= 1 and s >= 1");
      }
      for (std::size_t c = 0; c < params.clique_count; ++c) {
        const Arm base = c * params.clique_size;
        for (Arm u = 0; u < params.clique_size; ++u) {
          for (Arm v = 0; v < params.clique_size; ++v) add(base + u, base + v, false);
        }
      }
      break;
    case GraphFamily::kCycle:
      for (Arm v = 0; v < k; ++v) add(v, (v + 1) % k, !params.directed);
      break;
  }
  return FeedbackGraph(k, edges);
}

GraphSchedule GraphSchedule::Fixed(FeedbackGraph graph) {
  GraphSchedule schedule(Kind::kFixed, graph.num_arms());
  schedule.graphs_.push_back(std::move(graph));
  return schedule;
}

GraphSchedule GraphSchedule::Periodic(std::vector<FeedbackGraph> graphs,
                                      std::size_t period) {
  if (graphs.empty()) throw std::domain_error("empty graph schedule");
  if (period < 1) throw std::domain_error("schedule period must be >= 1");
  const std::size_t k = graphs.front().num_arms();
  for (const auto& g : graphs) {
    if (g.num_arms() != k) {
      throw std::domain_error("all graphs of a schedule need the same K");
    }
  }
  if (graphs.size() == 1) return Fixed(std::move(graphs.front()));
  GraphSchedule schedule(Kind::kPeriodic, k);
  schedule.graphs_ = std::move(graphs);
  schedule.period_ = period;
  return schedule;
}

GraphSchedule GraphSchedule::Random(GraphFamilyParams params,
                                    std::uint64_t seed, std::size_t period) {
  if (period < 1) throw std::domain_error("schedule period must be >= 1");
  // Validates the parameters and fixes K.
  const FeedbackGraph probe = GenerateGraph(params, seed);
  GraphSchedule schedule(Kind::kRandom, probe.num_arms());
  schedule.family_ = params;
  schedule.seed_ = seed;
  schedule.period_ = period;
  return schedule;
}

const FeedbackGraph& GraphSchedule::At(std::size_t t,
                                       GraphCursor& cursor) const {
  switch (kind_) {
    case Kind::kFixed:
      return graphs_.front();
    case Kind::kPeriodic:
      return graphs_[((t - 1) / period_) % graphs_.size()];
    case Kind::kRandom: {
      const std::size_t block = (t - 1) / period_;
      if (!cursor.graph || cursor.block != block) {
        cursor.graph.emplace(GenerateGraph(family_, DeriveSeed(seed_, {block})));
        cursor.block = block;
      }
      return *cursor.graph;
    }
  }
  throw std::logic_error("unknown schedule kind");
}

nlohmann::json GraphSchedule::ToJson() const {
  switch (kind_) {
    case Kind::kFixed:
      return GraphToJson(graphs_.front());
    case Kind::kPeriodic: {
      nlohmann::json graphs = nlohmann::json::array();
      for (const auto& g : graphs_) graphs.push_back(GraphToJson(g));
      return {{"graphs", graphs}, {"period", period_}};
    }
    case Kind::kRandom: {
      auto j = GraphFamilyToJson(family_);
      j["period"] = period_;
      j["seed"] = seed_;
      return j;
    }
  }
  return nullptr;
}

FeedbackGraph GraphObjectFromJson(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir,
                                  std::uint64_t seed) {
  if (j.is_string()) {
    return LoadGraphFile(Resolve(base_dir, j.get<std::string>()));
  }
  if (!j.is_object()) {
    throw GraphParseError(fmt::format("not a graph object: {}", j.dump()), 0);
  }
  if (j.contains("file")) {
    return LoadGraphFile(Resolve(base_dir, j["file"].get<std::string>()),
                         {.strict_self_loops = j.value("strict", false)});
  }
  if (j.contains("family")) {
    return GenerateGraph(GraphFamilyFromJson(j), j.value("seed", seed));
  }
  return GraphFromJson(j, {.strict_self_loops = j.value("strict", false)});
}

GraphSchedule GraphScheduleFromJson(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir,
                                    std::uint64_t seed) {
  if (j.is_string()) {
    const auto path = Resolve(base_dir, j.get<std::string>());
    std::ifstream in(path);
    if (!in) {
      throw std::runtime_error(
          fmt::format("cannot open graph schedule {}", path.string()));
    }
    in >> std::ws;
    if (in.peek() == '{' || in.peek() == '[') {
      nlohmann::json inner;
      in >> inner;
      // A plain {"K", "edges"} file is a fixed graph.
      return GraphScheduleFromJson(inner, path.parent_path(), seed);
    }
    return GraphSchedule::Fixed(LoadGraph(in));
  }
  auto graph_list = [&](const nlohmann::json& list) {
    std::vector<FeedbackGraph> graphs;
    for (std::size_t n = 0; n < list.size(); ++n) {
      graphs.push_back(
          GraphObjectFromJson(list[n], base_dir, DeriveSeed(seed, {n})));
    }
    return graphs;
  };
  if (j.is_array()) return GraphSchedule::Periodic(graph_list(j), 1);
  if (j.contains("graphs")) {
    return GraphSchedule::Periodic(graph_list(j["graphs"]),
                                   j.value("period", std::size_t{1}));
  }
  if (j.contains("family") && j.contains("period")) {
    return GraphSchedule::Random(GraphFamilyFromJson(j), j.value("seed", seed),
                                 j["period"].get<std::size_t>());
  }
  return GraphSchedule::Fixed(GraphObjectFromJson(j, base_dir, seed));
}

}  // namespace graphbandit
