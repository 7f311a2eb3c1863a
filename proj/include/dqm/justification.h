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

#ifndef DQM_JUSTIFICATION_H_
#define DQM_JUSTIFICATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "dqm/anonymizer.h"
#include "dqm/gtree.h"
#include "dqm/info_theory.h"
#include "dqm/quality_metrics.h"
#include "dqm/stat_tests.h"
#include "dqm/table.h"

namespace dqm {

// ---------------------------------------------------------------------------
// Classifier-style evaluation of a metric against ground-truth labels.

// Trapezoidal area under the ROC curve of `scores` as a predictor of
// label 1. Tied scores form one ROC step.
double RocAuc(absl::Span<const double> scores, absl::Span<const int> labels);

// sum_n (R_n - R_{n-1}) P_n over the distinct score thresholds, descending.
double AveragePrecision(absl::Span<const double> scores,
                        absl::Span<const int> labels);

struct CurvePoint {
  double threshold = 0.0;
  size_t accepted = 0;  // records with score >= threshold
  double tpr = 0.0;
  double fpr = 0.0;
  double precision = 1.0;
  double recall = 0.0;
  // Error rates among accepted records; 0 when nothing is accepted.
  double type1_rate = 0.0;
  double type2_rate = 0.0;
  double sign_mismatch_rate = 0.0;
  double total_error_rate() const {
    return type1_rate + type2_rate + sign_mismatch_rate;
  }
};

// Scores and labels of one metric, NoSignal records and records without a
// score for the metric left out.
struct ScoredRecords {
  std::vector<double> scores;
  std::vector<int> labels;
  std::vector<ErrorClass> errors;
  std::vector<int> generators;
};
ScoredRecords ExtractScores(absl::Span<const LabelRecord> records,
                            absl::string_view metric);

// Grid thresholds i * step for i = 0 .. ceil(1 / step) - 1.
std::vector<double> ThresholdGrid(double step);
std::vector<CurvePoint> ErrorCurve(const ScoredRecords& scored,
                                   absl::Span<const double> grid);

// Smallest grid threshold accepting at least one record with total error
// rate <= max_error; nullopt when none qualifies.
std::optional<double> RecommendThreshold(absl::Span<const CurvePoint> curve,
                                         double max_error = 0.05);

// Whether total error rate never rises above its running minimum over
// smaller thresholds, among points accepting at least `min_accepted` records.
// With z > 0 a rise counts only when it exceeds z binomial standard errors
// of the later point, sqrt(e (1 - e) / accepted). z = 0 is the strict check.
bool ErrorCurveNonIncreasing(absl::Span<const CurvePoint> curve, double z = 0.0,
                             size_t min_accepted = 1);

struct CurveOptions {
  double grid_step = 0.01;
  double max_error = 0.05;
  double monotone_z = 0.0;
  size_t monotone_min_accepted = 1;
};

struct GeneratorAuc {
  int generator = -1;
  double auc = 0.0;
  double average_precision = 0.0;
};

struct MetricEvaluation {
  std::string metric_name;
  size_t n_records = 0;
  size_t n_positive = 0;
  double auc = 0.0;
  double average_precision = 0.0;
  std::vector<GeneratorAuc> per_generator;  // ascending generator id
  std::vector<CurvePoint> curve;
  std::optional<double> recommended_threshold;
  bool error_curve_non_increasing = false;

  // Best and worst generator by AUC; nullopt without per-generator data.
  std::optional<GeneratorAuc> BestGenerator() const;
  std::optional<GeneratorAuc> WorstGenerator() const;
  nlohmann::json ToJson() const;
};

// Fails when the metric has no scored records or only one label class.
absl::StatusOr<MetricEvaluation> EvaluateMetric(
    absl::Span<const LabelRecord> records, absl::string_view metric,
    const CurveOptions& options = {});

struct MetricComparison {
  std::vector<MetricEvaluation> evaluations;
  struct Delta {
    std::string a;
    std::string b;
    double delta_auc = 0.0;  // auc(a) - auc(b)
    double delta_ap = 0.0;
    bool comparable = false;  // |delta_auc| and |delta_ap| < 0.05
  };
  std::vector<Delta> deltas;  // every ordered pair (i < j)
  nlohmann::json ToJson() const;
};

absl::StatusOr<MetricComparison> CompareMetrics(
    absl::Span<const LabelRecord> records,
    absl::Span<const std::string> metric_names,
    const CurveOptions& options = {});

// Error class shares among records of the given pass/fail status, NoSignal
// records left out.
struct ErrorBreakdown {
  size_t n = 0;
  double type1 = 0.0;
  double type2 = 0.0;
  double sign_mismatch = 0.0;
  double none = 0.0;
  double total_error() const { return type1 + type2 + sign_mismatch; }
};
ErrorBreakdown BreakdownByPass(absl::Span<const LabelRecord> records,
                               bool passed);

// ---------------------------------------------------------------------------
// Simulation.

struct SimulationConfig {
  size_t n_generators = 2;
  size_t runs_per_generator = 40;
  std::vector<size_t> row_counts = {750, 1337, 2113, 3571, 4999};
  std::vector<int> k_values = {2, 5, 10, 25, 50, 100};
  size_t min_quasi_ids = 1;
  size_t max_quasi_ids = 3;
  double alpha = 0.05;
  size_t min_group_size = 30;
  uint64_t seed = 0;
  size_t jobs = 0;  // 0: hardware concurrency
  ThresholdConfig thresholds;
  NmiConfig nmi;
  // k is taken from k_values.
  AnonymizerOptions anonymizer;

  absl::Status Validate(size_t source_rows) const;
};

struct SimulationResult {
  std::vector<LabelRecord> records;  // ordered by (generator, run, k)
  size_t applications = 0;
  size_t failed_applications = 0;
  std::vector<std::string> failures;
};

// For each generator and run: samples a synthetic table, picks a subset of
// quasi-identifiers, anonymizes at every k, scores every metric and labels
// every (quasi-identifier, sensitive group). Failed applications are
// recorded and skipped; more than 10% failures is an error.
absl::StatusOr<SimulationResult> RunSimulation(const Table& source,
                                               const GTreeMap& gtrees,
                                               const SimulationConfig& config);

// Label records as a delimiter-separated table with one column per metric.
std::string FormatLabelRecords(absl::Span<const LabelRecord> records);
absl::StatusOr<std::vector<LabelRecord>> ParseLabelRecords(
    absl::string_view text);
// Curve points of one or more evaluations in long format.
std::string FormatCurves(absl::Span<const MetricEvaluation> evaluations);

}  // namespace dqm

#endif  // DQM_JUSTIFICATION_H_
