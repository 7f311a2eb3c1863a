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

#ifndef DQM_QUALITY_METRICS_H_
#define DQM_QUALITY_METRICS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dqm/anonymizer.h"
#include "dqm/info_theory.h"
#include "dqm/table.h"
#include "nlohmann/json.hpp"

namespace dqm {

namespace metric {
inline constexpr char kPearson[] = "pearson";
inline constexpr char kRilmNumerical[] = "rilm_numerical";
inline constexpr char kRilmCategorical[] = "rilm_categorical";
inline constexpr char kNmiv1[] = "nmiv1";
inline constexpr char kNmiv2[] = "nmiv2";
inline constexpr char kPctns[] = "pctns";
// Reported as 1 - ILM / (number of numerical quasi-identifiers).
inline constexpr char kIlm[] = "ilm";
}  // namespace metric

// Every metric name the toolkit knows, in report order.
const std::vector<std::string>& AllMetricNames();
bool IsMetricName(absl::string_view name);

struct ThresholdConfig {
  double pearson_min = 0.90;
  double rilm_categorical_min = 0.90;
  // Per-column overrides of rilm_categorical_min.
  std::map<std::string, double> rilm_categorical_special;
  double nmiv1_min = 0.80;
  double pctns_min = 0.99;
  std::optional<double> rilm_numerical_min;
  std::optional<double> nmiv2_min;

  absl::Status Validate() const;
  // Gating threshold for a metric, or nullopt when the metric does not gate.
  std::optional<double> For(absl::string_view metric,
                            absl::string_view column = "") const;

  // Keys: pearson, rilm_categorical, rilm_categorical_special, nmiv1, pctns,
  // rilm_numerical, nmiv2. Absent keys keep their defaults.
  static absl::StatusOr<ThresholdConfig> FromJson(const nlohmann::json& doc);
  nlohmann::json ToJson() const;
};

struct ColumnMetric {
  std::string column;
  std::string metric;
  std::optional<double> value;  // nullopt: not applicable
  std::string note;
};

struct Failure {
  std::string metric;
  std::string scope;  // column name, or "dataset"
  double value = 0.0;
  double threshold = 0.0;

  friend bool operator==(const Failure&, const Failure&) = default;
};

struct MetricReport {
  std::vector<ColumnMetric> per_column;
  std::map<std::string, double> dataset_level;
  double pctns = 0.0;
  bool passed = false;
  std::vector<Failure> failures;
  std::vector<std::string> warnings;

  std::optional<double> Value(absl::string_view column,
                              absl::string_view metric) const;
  std::optional<double> DatasetValue(absl::string_view metric) const;

  nlohmann::json ToJson() const;
  // Columns: scope,metric,value,threshold,passed. Dataset rows use scope
  // "dataset"; not-applicable values are empty.
  std::string ToCsv(const ThresholdConfig& thresholds) const;
};

// max(0, Pearson correlation) over aligned pairs with both sides present;
// nullopt when fewer than two pairs remain or either side is constant.
absl::StatusOr<std::optional<double>> PearsonRho(const DatasetPair& pair,
                                                 absl::string_view column);

// 1 - sum_e |e| RIL(e) / |A| where RIL(e) is the spread of the class's
// original values over the spread of the whole original column.
absl::StatusOr<std::optional<double>> RilmNumerical(
    const Table& original, const AnonymizationResult& result,
    absl::string_view column);

// Same weighting with RIL(e) = size(lca node) / size(root).
absl::StatusOr<std::optional<double>> RilmCategorical(
    const AnonymizationResult& result, absl::string_view column);

// Fraction of original rows that survive suppression.
absl::StatusOr<double> Pctns(const AnonymizationResult& result,
                             size_t n_original);

// sum_e |e| sum_i RIL(e, i) / |A| over numerical quasi-identifiers; nullopt
// when there are none or nothing survived.
absl::StatusOr<std::optional<double>> IlmRaw(const Table& original,
                                             const AnonymizationResult& result);
// 1 - IlmRaw / (number of numerical quasi-identifiers).
absl::StatusOr<std::optional<double>> IlmScore(
    const Table& original, const AnonymizationResult& result);

struct EvaluateOptions {
  NmiConfig nmi;
  // NMI estimation dominates the cost; callers that only need the cheap
  // metrics may turn it off.
  bool compute_nmi = true;
};

// Pearson, NMIv1 and NMIv2 for every numerical column of the anonymized
// table, RILM for every quasi-identifier, PCTNS and ILM for the dataset.
// Dataset-level values are minima over applicable columns; a metric gates
// only when its threshold is set.
absl::StatusOr<MetricReport> Evaluate(const DatasetPair& pair,
                                      const AnonymizationResult& result,
                                      const ThresholdConfig& thresholds,
                                      const EvaluateOptions& options = {});

}  // namespace dqm

#endif  // DQM_QUALITY_METRICS_H_
