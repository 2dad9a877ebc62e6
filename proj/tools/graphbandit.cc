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

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "graphbandit/env.h"
#include "graphbandit/experiment_spec.h"
#include "graphbandit/graph.h"
#include "graphbandit/harness.h"
#include "graphbandit/verify.h"

namespace gb = graphbandit;

namespace {

int RunCommand(const std::string& spec_path, std::optional<std::size_t> threads,
               bool quiet) {
  const gb::ExperimentSpec spec = gb::LoadExperimentSpec(spec_path);
  gb::RunOptions options;
  options.threads = threads ? threads : spec.threads;
  const auto result = gb::RunExperiment(spec, options);
  if (!quiet) {
    std::cout << fmt::format("config {} -> {}\n", result.config_hash,
                             spec.output_dir.string());
    for (const auto& curve : result.curves) {
      std::cout << fmt::format("{:>12}  regret(T={}) = {:.3f} +/- {:.3f}\n",
                               curve.learner, result.rounds.back(),
                               curve.mean.back(), curve.standard_error.back());
    }
  }
  return 0;
}

int VerifyCommand(const std::string& level, std::uint64_t seed) {
  const auto outcomes = gb::RunVerification(
      level == "full" ? gb::VerifyLevel::kFull : gb::VerifyLevel::kFast, seed,
      &std::cout);
  std::size_t failed = 0;
  for (const auto& outcome : outcomes) failed += outcome.passed ? 0 : 1;
  std::cout << fmt::format("{} of {} checks passed\n", outcomes.size() - failed,
                           outcomes.size());
  return failed == 0 ? 0 : 1;
}

int GraphStatsCommand(const std::string& path, bool strict) {
  const auto g = gb::LoadGraphFile(path, {.strict_self_loops = strict});
  nlohmann::json out = gb::GraphStatsToJson(gb::ComputeGraphStats(g));
  out["K"] = g.num_arms();
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online learning with directed feedback graphs"};
  app.require_subcommand(1);

  std::optional<std::size_t> threads;
  app.add_option("--threads", threads,
                 "Worker threads (default: GRAPHBANDIT_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  auto* run = app.add_subcommand("run", "Run an experiment spec");
  std::string spec_path;
  bool quiet = false;
  run->add_option("spec", spec_path, "Experiment spec (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_flag("-q,--quiet", quiet, "Print nothing on success");

  auto* verify = app.add_subcommand("verify", "Run the property checks");
  std::string level = "fast";
  std::uint64_t verify_seed = 20240601;
  verify->add_option("--level", level)
      ->check(CLI::IsMember({"fast", "full"}))
      ->capture_default_str();
  verify->add_option("--seed", verify_seed)->capture_default_str();

  auto* stats = app.add_subcommand("graph-stats", "Print independence numbers");
  std::string graph_path;
  bool strict = false;
  stats->add_option("graph", graph_path, "Edge list or JSON graph")
      ->required()
      ->check(CLI::ExistingFile);
  stats->add_flag("--strict-self-loops", strict,
                  "Reject files that omit any self-loop");

  auto* gen = app.add_subcommand("gen-graph", "Generate a feedback graph");
  gb::GraphFamilyParams params;
  std::string family;
  std::uint64_t gen_seed = 0;
  std::string format = "edges";
  std::string output;
  gen->add_option("--family", family,
                  "bandit|complete|erdos_renyi|star|cliques|cycle")
      ->required();
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("-K,--num-arms", params.num_arms, "Number of arms");
  gen->add_option("-p,--edge-probability", params.edge_probability)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen->add_flag("--directed", params.directed);
  gen->add_option("-m,--clique-count", params.clique_count);
  gen->add_option("-s,--clique-size", params.clique_size);
  gen->add_option("--format", format)
      ->check(CLI::IsMember({"edges", "json"}))
      ->capture_default_str();
  gen->add_option("-o,--output", output, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return RunCommand(spec_path, threads, quiet);
    if (*verify) return VerifyCommand(level, verify_seed);
    if (*stats) return GraphStatsCommand(graph_path, strict);
    if (*gen) {
      params.family = gb::ParseGraphFamily(family);
      const auto g = gb::GenerateGraph(params, gen_seed);
      const std::string text = format == "json"
                                   ? gb::GraphToJson(g).dump() + "\n"
                                   : gb::SerializeEdgeList(g);
      if (output.empty()) {
        std::cout << text;
      } else {
        std::ofstream(output) << text;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
