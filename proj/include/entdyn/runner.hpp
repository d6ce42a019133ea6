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

#ifndef ENTDYN_RUNNER_HPP
#define ENTDYN_RUNNER_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "entdyn/config.hpp"

namespace entdyn {

struct CsvColumn {
  std::string name;
  std::string description;
};

/// CSV emitter with a generated schema sidecar (<file>.schema.json) that
/// documents every column.
class CsvWriter {
 public:
  CsvWriter(std::filesystem::path path, std::vector<CsvColumn> columns);
  void write_row(const std::vector<std::string>& cells);
  void finish();  // writes file and sidecar; called by the destructor too
  ~CsvWriter();

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::vector<CsvColumn> columns_;
  std::vector<std::vector<std::string>> rows_;
  bool finished_ = false;
};

std::string format_number(double value);

/// Executes the configured task, writing outputs under `output_dir`.
/// Returns the process exit code: 0 success, 2 invariant violation.
/// Configuration and numerical errors are reported by exception.
int run_task(const ExperimentConfig& config,
             const std::filesystem::path& output_dir, std::ostream& log);

}  // namespace entdyn

#endif  // ENTDYN_RUNNER_HPP
