// Copyright 2026 The dirlab Authors
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

#ifndef DIRLAB_EXPERIMENTS_HPP
#define DIRLAB_EXPERIMENTS_HPP

#include <string>
#include <utility>
#include <vector>

#include "dirlab/config.hpp"
#include "dirlab/report.hpp"

namespace dirlab {

// Exit-code contract of the runner.
enum ExitCode : int {
  kPass = 0,
  kFail = 1,
  kInconclusive = 2,
  kConfigError = 3,
  kNumericalAbort = 4,
};

struct RunResult {
  std::string experiment;
  std::string status;  // "pass", "fail" or "inconclusive"
  int exit_code = kPass;
  Json report;  // deterministic body; no timestamps
  std::vector<std::pair<std::string, std::string>> extra_files;  // name -> content
};

const std::vector<std::string>& experiment_names();

/// Dispatches on cfg["experiment"]. Throws ConfigError for unknown names or
/// bad parameters and NumericalAbort on solver blow-up.
RunResult run_experiment(const Config& cfg);

/// Writes <experiment>_report.json, the extra files and a manifest envelope
/// (timestamp plus the resolved config echo) into out_dir.
void write_run(const RunResult& result, const Config& resolved, const std::string& out_dir);

}  // namespace dirlab

#endif  // DIRLAB_EXPERIMENTS_HPP
