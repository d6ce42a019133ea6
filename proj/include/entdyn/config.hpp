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

#ifndef ENTDYN_CONFIG_HPP
#define ENTDYN_CONFIG_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "entdyn/analysis.hpp"
#include "entdyn/lindblad.hpp"

namespace entdyn {

enum class Task { kEvolve, kVerifyBounds, kThreshold, kLargeN, kStationary };

struct TimeGrid {
  double start = 0.0;
  double stop = 1.0;
  int points = 2;
  bool log_spacing = false;

  std::vector<double> times() const;
};

/// Declarative initial state; built lazily so config validation never
/// constructs matrices.
struct InitialStateSpec {
  enum class Kind {
    kExample,
    kSeparablePure,
    kDiagonalClass,
    kExplicit,
    kMixture
  };
  Kind kind = Kind::kExample;
  double p = 1.0;                      // example
  OperatorSpec poly_a, poly_b;         // separable_pure
  double alpha = 1.0;                  // diagonal_class
  std::vector<double> c;               // diagonal_class
  DiagonalClassCoefficients table;     // diagonal_class
  MatrixXcd matrix;                    // explicit
  int sector = -1;                     // explicit / mixture component
  struct Component {
    double weight;
    int sector;
    std::shared_ptr<InitialStateSpec> state;
  };
  std::vector<Component> components;  // mixture

  SectorDensityMatrix build_sector(int n_particles, const Bipartition& bip) const;
  NumberMixture build(int n_particles, const Bipartition& bip) const;
};

struct LargeNSpec {
  std::vector<int> n_values;
  std::vector<double> rates{0.5, 0.5};
  int n_terms = 2;
};

struct ThresholdSpec {
  ExampleKind kind = ExampleKind::kLoss;
  double p = 0.7;
  std::vector<double> rates;
};

struct ExperimentConfig {
  int n_particles = 1;
  int n_modes = 2;
  int m = 1;
  OperatorSpec hamiltonian;
  std::vector<JumpOperator> jumps;
  InitialStateSpec initial_state;
  Task task = Task::kEvolve;
  TimeGrid grid;
  std::string output_path = "out.csv";
  std::uint64_t seed = 0;
  bool oracle_column = false;  // slow cross-check column, flag-gated
  std::optional<LargeNSpec> large_n;
  std::optional<ThresholdSpec> threshold;
  std::string suite;  // "paper-examples" bundles the canonical checks

  Bipartition bipartition() const { return Bipartition(m, n_modes); }
  LindbladGenerator generator() const { return {hamiltonian, jumps}; }
  bool has_loss() const {
    for (const auto& j : jumps)
      if (j.op.net_particle_change() < 0) return true;
    return false;
  }
};

/// Parses and validates a configuration file. Throws ConfigInvalid carrying a
/// JSON-pointer to the offending field. `task` (when given) must match the
/// subcommand the file is used with.
ExperimentConfig parse_config_file(const std::string& path,
                                   std::optional<Task> task_override);
ExperimentConfig parse_config_text(const std::string& text,
                                   std::optional<Task> task_override);

std::string task_name(Task task);

}  // namespace entdyn

#endif  // ENTDYN_CONFIG_HPP
