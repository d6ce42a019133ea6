// Copyright 2026 The entdyn authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>

#include "entdyn/runner.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
  bool oracle = false;
};

void add_common(CLI::App* cmd, CommonOptions& options) {
  cmd->add_option("--config", options.config_path, "experiment config (JSON)")
      ->required();
  cmd->add_option("--output", options.output_dir, "output directory");
  cmd->add_option("--seed", options.seed, "seed for randomized suites");
  cmd->add_flag("--oracle", options.oracle,
                "emit the slow partial-transpose cross-check column");
}

int execute(entdyn::Task task, const CommonOptions& options) {
  entdyn::ExperimentConfig config =
      entdyn::parse_config_file(options.config_path, task);
  if (options.seed) config.seed = *options.seed;
  config.oracle_column = options.oracle;
  std::string output_dir = options.output_dir;
  if (output_dir.empty()) {
    // The output directory is the only environment override.
    const char* env = std::getenv("ENTDYN_OUTPUT_DIR");
    output_dir = env ? env : ".";
  }
  return entdyn::run_task(config, output_dir, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "entdyn: entanglement dynamics of bosonic modes under Markovian noise"};
  app.require_subcommand(1);

  const struct {
    const char* name;
    const char* help;
    entdyn::Task task;
  } subcommands[] = {
      {"evolve", "evolve a state and tabulate negativity", entdyn::Task::kEvolve},
      {"verify", "run the property suite for the configured system",
       entdyn::Task::kVerifyBounds},
      {"threshold", "separability threshold of the reference examples",
       entdyn::Task::kThreshold},
      {"large-n", "exact vs asymptotic negativity decay for two modes",
       entdyn::Task::kLargeN},
      {"stationary", "null space of the Liouvillian and stationary states",
       entdyn::Task::kStationary},
  };

  CommonOptions options[std::size(subcommands)];
  for (std::size_t i = 0; i < std::size(subcommands); ++i)
    add_common(app.add_subcommand(subcommands[i].name, subcommands[i].help),
               options[i]);

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < std::size(subcommands); ++i) {
    if (!app.get_subcommand(subcommands[i].name)->parsed()) continue;
    try {
      return execute(subcommands[i].task, options[i]);
    } catch (const entdyn::ConfigInvalid& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 1;
    } catch (const entdyn::TaskFailed& e) {
      std::cerr << "numerical failure: " << e.what() << "\n";
      return 3;
    } catch (const entdyn::Error& e) {
      std::cerr << "invariant violation: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 3;
    }
  }
  return 1;
}
