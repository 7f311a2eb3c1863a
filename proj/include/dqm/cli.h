//
// Copyright 2026 The dqmetrics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DQM_CLI_H_
#define DQM_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dqm/anonymizer.h"
#include "dqm/gtree.h"
#include "dqm/info_theory.h"
#include "dqm/justification.h"
#include "dqm/minimization.h"
#include "dqm/quality_metrics.h"
#include "dqm/table.h"

namespace dqm::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitQualityFail = 1,  // metrics only
  kExitUsage = 2,
  kExitRuntime = 3,
};

// Flag values; unset flags fall back to DQM_* environment variables and
// then to the config file.
struct Overrides {
  std::optional<std::string> config;
  std::optional<uint64_t> seed;
  std::optional<size_t> jobs;
  std::optional<std::string> out_dir;
  std::optional<int> k;
  std::optional<size_t> n;
  std::optional<std::string> metrics;  // comma-separated
  std::optional<double> alpha;
};

struct RunConfig {
  std::string base_dir;  // relative paths in the config resolve against it
  std::vector<ColumnSchema> schema;
  CsvOptions csv;
  GTreeMap gtrees;
  ThresholdConfig thresholds;
  NmiConfig nmi;
  AnonymizerOptions anonymizer;
  SimulationConfig simulation;
  CurveOptions curves;
  SensitivityConfig sensitivity;
  std::vector<std::string> metrics = AllMetricNames();
  size_t synthetic_rows = 5000;

  std::optional<std::string> original;
  std::optional<std::string> anonymized;
  std::optional<std::string> input;
  std::optional<std::string> source;

  std::string out_dir = "dqm_out";
  uint64_t seed = 0;
  size_t jobs = 0;
  double alpha = 0.05;
};

// Reads the JSON config named by overrides.config (if any) and applies the
// overrides. Config errors are InvalidArgument or NotFound.
absl::StatusOr<RunConfig> LoadRunConfig(const Overrides& overrides);

// Entry point of the `dqm` tool. Returns the process exit code.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace dqm::cli

#endif  // DQM_CLI_H_
