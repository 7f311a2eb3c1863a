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

#include "dqm/minimization.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "dqm/parallel.h"
#include "dqm/random.h"

namespace dqm {

namespace {

constexpr uint64_t kConfirmationStream = 0xC0FF1A;

}  // namespace

absl::Status SensitivityConfig::Validate() const {
  if (n_min < 1) return absl::InvalidArgumentError("sensitivity: n must be >= 1");
  if (!(step_frac > 0.0 && step_frac <= 1.0)) {
    return absl::InvalidArgumentError("sensitivity: step_frac must be in (0, 1]");
  }
  if (m_subsamples < 1) {
    return absl::InvalidArgumentError("sensitivity: m_subsamples must be >= 1");
  }
  if (!(max_size_factor >= 1.0)) {
    return absl::InvalidArgumentError("sensitivity: max_size_factor must be >= 1");
  }
  if (anonymizer.k < 2) return absl::InvalidArgumentError("sensitivity: k must be >= 2");
  return thresholds.Validate();
}

std::vector<size_t> SizeGrid(size_t n, double step_frac, double max_factor) {
  std::vector<size_t> sizes;
  if (n == 0 || !(step_frac > 0.0)) return sizes;
  const double limit = max_factor * static_cast<double>(n);
  for (size_t j = 0;; ++j) {
    const double raw = static_cast<double>(n) * (1.0 + j * step_frac);
    if (raw > limit * (1.0 + 1e-12)) break;
    const size_t s = static_cast<size_t>(std::llround(raw));
    if (sizes.empty() || s != sizes.back()) sizes.push_back(s);
  }
  return sizes;
}

std::vector<size_t> SubsamplePositions(size_t n_rows, size_t size,
                                       size_t index, uint64_t seed) {
  Rng rng(MixSeed(seed, size), index);
  std::vector<size_t> pos = rng.SampleWithoutReplacement(n_rows, size);
  std::sort(pos.begin(), pos.end());
  return pos;
}

std::vector<size_t> ConfirmationPositions(size_t n_rows, size_t size,
                                          uint64_t seed) {
  Rng rng(MixSeed(seed, kConfirmationStream), size);
  std::vector<size_t> pos = rng.SampleWithoutReplacement(n_rows, size);
  std::sort(pos.begin(), pos.end());
  return pos;
}

bool SensitivityReport::SizePasses(size_t size) const {
  auto it = per_size.find(size);
  if (it == per_size.end() || it->second.empty()) return false;
  return std::all_of(it->second.begin(), it->second.end(),
                     [](const MetricReport& r) { return r.passed; });
}

nlohmann::json SensitivityReport::ToJson() const {
  nlohmann::json sizes_doc = nlohmann::json::array();
  for (size_t s : sizes) {
    nlohmann::json reports = nlohmann::json::array();
    auto it = per_size.find(s);
    if (it != per_size.end()) {
      for (const MetricReport& r : it->second) reports.push_back(r.ToJson());
    }
    nlohmann::json entry = {{"size", s},
                            {"passed", SizePasses(s)},
                            {"subsamples", reports}};
    auto f = failure_summary.find(s);
    if (f != failure_summary.end() && !f->second.empty()) {
      entry["failure_summary"] = f->second;
    }
    sizes_doc.push_back(std::move(entry));
  }
  nlohmann::json doc = {{"sizes", sizes_doc}};
  doc["minimum_passing_size"] = minimum_passing_size
                                    ? nlohmann::json(*minimum_passing_size)
                                    : nlohmann::json();
  doc["confirmation"] = confirmation ? confirmation->ToJson() : nlohmann::json();
  doc["confirmation_row_ids"] = confirmation_row_ids;
  return doc;
}

namespace {

absl::StatusOr<MetricReport> ScoreSubsample(const Table& table,
                                            absl::Span<const size_t> positions,
                                            absl::Span<const std::string> qids,
                                            const GTreeMap& trees,
                                            const SensitivityConfig& config,
                                            uint64_t nmi_seed) {
  const Table sample = table.SelectRows(positions);
  absl::StatusOr<AnonymizationResult> result =
      Anonymize(sample, qids, trees, config.anonymizer);
  if (absl::IsFailedPrecondition(result.status())) {
    // An unreleasable sub-sample simply fails the size.
    MetricReport failed;
    failed.passed = false;
    failed.warnings.push_back(
        absl::StrCat("anonymization failed: ", result.status().message()));
    return failed;
  }
  if (!result.ok()) return result.status();
  absl::StatusOr<DatasetPair> pair = ToPair(sample, *result);
  if (!pair.ok()) return pair.status();
  EvaluateOptions opts = config.evaluation;
  opts.nmi.seed = nmi_seed;
  return Evaluate(*pair, *result, config.thresholds, opts);
}

std::string Summarize(const std::vector<MetricReport>& reports) {
  std::map<std::string, size_t> counts;
  size_t failing = 0;
  for (const MetricReport& r : reports) {
    if (r.passed) continue;
    ++failing;
    for (const Failure& f : r.failures) {
      ++counts[f.scope == "dataset" ? f.metric
                                    : absl::StrCat(f.metric, "[", f.scope, "]")];
    }
    for (const std::string& w : r.warnings) {
      if (absl::StartsWith(w, "anonymization failed")) ++counts["anonymization"];
    }
  }
  if (failing == 0) return "";
  std::vector<std::string> parts;
  for (const auto& [name, n] : counts) parts.push_back(absl::StrCat(name, " x", n));
  return absl::StrCat(failing, " of ", reports.size(),
                      " sub-samples fail: ", absl::StrJoin(parts, ", "));
}

}  // namespace

absl::StatusOr<SensitivityReport> SensitivityAnalysis(
    const Table& table, absl::Span<const std::string> quasi_ids,
    const GTreeMap& gtrees, const SensitivityConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  SensitivityReport report;
  report.sizes = SizeGrid(config.n_min, config.step_frac, config.max_size_factor);
  const size_t largest = report.sizes.back();
  if (table.num_rows() < largest) {
    return absl::FailedPreconditionError(absl::StrCat(
        "table too small: ", table.num_rows(), " rows, the grid needs ",
        largest, " (", config.max_size_factor, " x n)"));
  }
  absl::StatusOr<GTreeMap> trees = ResolveGTrees(table, quasi_ids, gtrees);
  if (!trees.ok()) return trees.status();

  const size_t m = config.m_subsamples;
  const size_t tasks = report.sizes.size() * m;
  std::vector<absl::StatusOr<MetricReport>> results(
      tasks, absl::UnknownError("not run"));
  ParallelFor(tasks, config.jobs, [&](size_t t) {
    const size_t size = report.sizes[t / m];
    const size_t index = t % m;
    const std::vector<size_t> pos =
        SubsamplePositions(table.num_rows(), size, index, config.seed);
    results[t] = ScoreSubsample(table, pos, quasi_ids, *trees, config,
                                MixSeed(MixSeed(config.seed, size), index));
  });
  for (size_t t = 0; t < tasks; ++t) {
    if (!results[t].ok()) return results[t].status();
    report.per_size[report.sizes[t / m]].push_back(*std::move(results[t]));
  }
  for (size_t s : report.sizes) {
    report.failure_summary[s] = Summarize(report.per_size[s]);
    if (!report.minimum_passing_size && report.SizePasses(s)) {
      report.minimum_passing_size = s;
    }
  }
  if (report.minimum_passing_size) {
    const std::vector<size_t> pos = ConfirmationPositions(
        table.num_rows(), *report.minimum_passing_size, config.seed);
    absl::StatusOr<MetricReport> confirm =
        ScoreSubsample(table, pos, quasi_ids, *trees, config,
                       MixSeed(config.seed, kConfirmationStream));
    if (!confirm.ok()) return confirm.status();
    report.confirmation = *std::move(confirm);
    for (size_t p : pos) report.confirmation_row_ids.push_back(table.row_ids()[p]);
    std::sort(report.confirmation_row_ids.begin(),
              report.confirmation_row_ids.end());
  }
  return report;
}

std::vector<PlotRow> SensitivityPlotRows(const SensitivityReport& report) {
  std::vector<PlotRow> rows;
  for (size_t s : report.sizes) {
    auto it = report.per_size.find(s);
    if (it == report.per_size.end()) continue;
    for (size_t j = 0; j < it->second.size(); ++j) {
      const MetricReport& r = it->second[j];
      for (const ColumnMetric& m : r.per_column) {
        rows.push_back({s, j, m.metric, m.column, m.value, r.passed});
      }
      for (const auto& [metric, value] : r.dataset_level) {
        rows.push_back({s, j, metric, "dataset", value, r.passed});
      }
    }
  }
  return rows;
}

std::string FormatSensitivityPlotData(const SensitivityReport& report) {
  std::string out = "size,subsample_index,metric,column,value,passed\n";
  for (const PlotRow& r : SensitivityPlotRows(report)) {
    absl::StrAppend(&out, r.size, ",", r.subsample_index, ",", r.metric, ",",
                    r.column, ",", r.value ? FormatNumber(*r.value) : "", ",",
                    r.passed ? "true" : "false", "\n");
  }
  return out;
}

absl::Status EmitSensitivityPlotData(const SensitivityReport& report,
                                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << FormatSensitivityPlotData(report);
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<std::vector<PlotRow>> ParseSensitivityPlotData(
    absl::string_view text) {
  std::vector<absl::string_view> lines = absl::StrSplit(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() ||
      lines[0] != "size,subsample_index,metric,column,value,passed") {
    return absl::InvalidArgumentError("plot data: unexpected header");
  }
  std::vector<PlotRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = SplitRecord(lines[i], ',');
    if (f.size() != 6) {
      return absl::InvalidArgumentError(
          absl::StrCat("plot data: line ", i + 1, " has ", f.size(), " fields"));
    }
    PlotRow r;
    if (!absl::SimpleAtoi(f[0], &r.size) ||
        !absl::SimpleAtoi(f[1], &r.subsample_index)) {
      return absl::InvalidArgumentError(
          absl::StrCat("plot data: bad integer on line ", i + 1));
    }
    r.metric = f[2];
    r.column = f[3];
    if (!f[4].empty()) {
      double v = 0.0;
      const auto [ptr, ec] =
          std::from_chars(f[4].data(), f[4].data() + f[4].size(), v);
      if (ec != std::errc() || ptr != f[4].data() + f[4].size()) {
        return absl::InvalidArgumentError(
            absl::StrCat("plot data: bad value on line ", i + 1));
      }
      r.value = v;
    }
    r.passed = f[5] == "true";
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace dqm
