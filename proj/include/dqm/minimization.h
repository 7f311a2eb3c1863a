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

#ifndef DQM_MINIMIZATION_H_
#define DQM_MINIMIZATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "dqm/anonymizer.h"
#include "dqm/gtree.h"
#include "dqm/quality_metrics.h"
#include "dqm/table.h"
#include "nlohmann/json.hpp"

namespace dqm {

struct SensitivityConfig {
  size_t n_min = 0;  // the analyst's required sample size n
  double step_frac = 0.05;
  size_t m_subsamples = 5;
  // Sizes run from n_min to max_size_factor * n_min.
  double max_size_factor = 2.0;
  AnonymizerOptions anonymizer;
  ThresholdConfig thresholds;
  EvaluateOptions evaluation;
  uint64_t seed = 0;
  size_t jobs = 0;

  absl::Status Validate() const;
};

// round(n (1 + j step)) for j = 0, 1, ... up to max_factor * n, without
// duplicates.
std::vector<size_t> SizeGrid(size_t n, double step_frac,
                             double max_factor = 2.0);

// Row positions of sub-sample `index` of the given size, ascending. Drawn
// without replacement from a stream keyed by (seed, size, index).
std::vector<size_t> SubsamplePositions(size_t n_rows, size_t size,
                                       size_t index, uint64_t seed);
// Positions of the fixed analysis sub-sample; it uses its own stream.
std::vector<size_t> ConfirmationPositions(size_t n_rows, size_t size,
                                          uint64_t seed);

struct SensitivityReport {
  std::vector<size_t> sizes;
  std::map<size_t, std::vector<MetricReport>> per_size;
  std::optional<size_t> minimum_passing_size;
  std::optional<MetricReport> confirmation;
  std::vector<RowId> confirmation_row_ids;  // ascending
  // One line per size naming the failing metrics, empty for passing sizes.
  std::map<size_t, std::string> failure_summary;

  bool SizePasses(size_t size) const;
  nlohmann::json ToJson() const;
};

// Anonymizes and scores m sub-samples at every grid size in ascending order
// (no early exit), reports the smallest size at which all sub-samples pass,
// and re-checks a fixed sub-sample of that size.
absl::StatusOr<SensitivityReport> SensitivityAnalysis(
    const Table& table, absl::Span<const std::string> quasi_ids,
    const GTreeMap& gtrees, const SensitivityConfig& config);

// Long-format rows: size,subsample_index,metric,column,value,passed, where
// column is "dataset" for dataset-level values and passed is the
// sub-sample's overall verdict.
struct PlotRow {
  size_t size = 0;
  size_t subsample_index = 0;
  std::string metric;
  std::string column;
  std::optional<double> value;
  bool passed = false;

  friend bool operator==(const PlotRow&, const PlotRow&) = default;
};
std::vector<PlotRow> SensitivityPlotRows(const SensitivityReport& report);
std::string FormatSensitivityPlotData(const SensitivityReport& report);
absl::Status EmitSensitivityPlotData(const SensitivityReport& report,
                                     const std::string& path);
absl::StatusOr<std::vector<PlotRow>> ParseSensitivityPlotData(
    absl::string_view text);

}  // namespace dqm

#endif  // DQM_MINIMIZATION_H_
