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

#include "dqm/justification.h"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <map>
#include <memory>
#include <numeric>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "dqm/parallel.h"
#include "dqm/random.h"
#include "dqm/synthetic.h"

namespace dqm {

namespace {

struct Ranked {
  double score;
  int label;
};

std::vector<Ranked> Descending(absl::Span<const double> scores,
                               absl::Span<const int> labels) {
  std::vector<Ranked> r;
  r.reserve(scores.size());
  for (size_t i = 0; i < scores.size() && i < labels.size(); ++i) {
    r.push_back({scores[i], labels[i]});
  }
  std::stable_sort(r.begin(), r.end(), [](const Ranked& a, const Ranked& b) {
    return a.score > b.score;
  });
  return r;
}

}  // namespace

double RocAuc(absl::Span<const double> scores, absl::Span<const int> labels) {
  const std::vector<Ranked> r = Descending(scores, labels);
  double pos = 0.0, neg = 0.0;
  for (const Ranked& x : r) (x.label == 1 ? pos : neg) += 1.0;
  if (pos == 0.0 || neg == 0.0) return std::nan("");
  double tp = 0.0, fp = 0.0, area = 0.0;
  for (size_t i = 0; i < r.size();) {
    const double prev_tp = tp, prev_fp = fp;
    size_t j = i;
    for (; j < r.size() && r[j].score == r[i].score; ++j) {
      (r[j].label == 1 ? tp : fp) += 1.0;
    }
    area += (fp - prev_fp) * (tp + prev_tp) / 2.0;
    i = j;
  }
  return area / (pos * neg);
}

double AveragePrecision(absl::Span<const double> scores,
                        absl::Span<const int> labels) {
  const std::vector<Ranked> r = Descending(scores, labels);
  double pos = 0.0;
  for (const Ranked& x : r) pos += x.label == 1 ? 1.0 : 0.0;
  if (pos == 0.0) return std::nan("");
  double tp = 0.0, fp = 0.0, ap = 0.0, prev_recall = 0.0;
  for (size_t i = 0; i < r.size();) {
    size_t j = i;
    for (; j < r.size() && r[j].score == r[i].score; ++j) {
      (r[j].label == 1 ? tp : fp) += 1.0;
    }
    const double recall = tp / pos;
    ap += (recall - prev_recall) * (tp / (tp + fp));
    prev_recall = recall;
    i = j;
  }
  return ap;
}

ScoredRecords ExtractScores(absl::Span<const LabelRecord> records,
                            absl::string_view metric) {
  ScoredRecords out;
  const std::string key(metric);
  for (const LabelRecord& r : records) {
    if (r.error_class == ErrorClass::kNoSignal) continue;
    auto it = r.metric_scores.find(key);
    if (it == r.metric_scores.end() || IsMissing(it->second)) continue;
    out.scores.push_back(it->second);
    out.labels.push_back(r.label);
    out.errors.push_back(r.error_class);
    out.generators.push_back(r.generator);
  }
  return out;
}

std::vector<double> ThresholdGrid(double step) {
  std::vector<double> grid;
  if (!(step > 0.0 && step <= 1.0)) return grid;
  const long steps = std::lround(1.0 / step);
  if (std::abs(steps * step - 1.0) < 1e-9) {
    // Exact decimal grid points such as 0.37 = 37 / 100.
    for (long i = 0; i < steps; ++i) grid.push_back(static_cast<double>(i) / steps);
  } else {
    for (long i = 0; i * step < 1.0; ++i) grid.push_back(i * step);
  }
  return grid;
}

std::vector<CurvePoint> ErrorCurve(const ScoredRecords& scored,
                                   absl::Span<const double> grid) {
  double pos = 0.0, neg = 0.0;
  for (int l : scored.labels) (l == 1 ? pos : neg) += 1.0;
  std::vector<CurvePoint> curve;
  curve.reserve(grid.size());
  for (double t : grid) {
    CurvePoint p;
    p.threshold = t;
    double tp = 0.0, fp = 0.0, e1 = 0.0, e2 = 0.0, es = 0.0;
    for (size_t i = 0; i < scored.scores.size(); ++i) {
      if (scored.scores[i] < t) continue;
      (scored.labels[i] == 1 ? tp : fp) += 1.0;
      switch (scored.errors[i]) {
        case ErrorClass::kTypeI:
          e1 += 1.0;
          break;
        case ErrorClass::kTypeII:
          e2 += 1.0;
          break;
        case ErrorClass::kSignMismatch:
          es += 1.0;
          break;
        default:
          break;
      }
    }
    const double accepted = tp + fp;
    p.accepted = static_cast<size_t>(accepted);
    p.tpr = pos > 0.0 ? tp / pos : 0.0;
    p.fpr = neg > 0.0 ? fp / neg : 0.0;
    p.recall = p.tpr;
    if (accepted > 0.0) {
      p.precision = tp / accepted;
      p.type1_rate = e1 / accepted;
      p.type2_rate = e2 / accepted;
      p.sign_mismatch_rate = es / accepted;
    }
    curve.push_back(p);
  }
  return curve;
}

std::optional<double> RecommendThreshold(absl::Span<const CurvePoint> curve,
                                         double max_error) {
  for (const CurvePoint& p : curve) {
    if (p.accepted > 0 && p.total_error_rate() <= max_error) return p.threshold;
  }
  return std::nullopt;
}

bool ErrorCurveNonIncreasing(absl::Span<const CurvePoint> curve, double z,
                             size_t min_accepted) {
  std::optional<double> lowest;
  for (const CurvePoint& p : curve) {
    if (p.accepted < std::max<size_t>(min_accepted, 1)) continue;
    const double e = p.total_error_rate();
    const double se = std::sqrt(e * (1.0 - e) / p.accepted);
    if (lowest && e > *lowest + z * se) return false;
    lowest = lowest ? std::min(*lowest, e) : e;
  }
  return true;
}

std::optional<GeneratorAuc> MetricEvaluation::BestGenerator() const {
  std::optional<GeneratorAuc> best;
  for (const GeneratorAuc& g : per_generator) {
    if (std::isnan(g.auc)) continue;
    if (!best || g.auc > best->auc) best = g;
  }
  return best;
}

std::optional<GeneratorAuc> MetricEvaluation::WorstGenerator() const {
  std::optional<GeneratorAuc> worst;
  for (const GeneratorAuc& g : per_generator) {
    if (std::isnan(g.auc)) continue;
    if (!worst || g.auc < worst->auc) worst = g;
  }
  return worst;
}

namespace {

nlohmann::json NumberOrNull(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
}

}  // namespace

nlohmann::json MetricEvaluation::ToJson() const {
  nlohmann::json gens = nlohmann::json::array();
  for (const GeneratorAuc& g : per_generator) {
    gens.push_back({{"generator", g.generator},
                    {"auc", NumberOrNull(g.auc)},
                    {"average_precision", NumberOrNull(g.average_precision)}});
  }
  nlohmann::json doc = {{"metric", metric_name},
                        {"n_records", n_records},
                        {"n_positive", n_positive},
                        {"auc", NumberOrNull(auc)},
                        {"average_precision", NumberOrNull(average_precision)},
                        {"per_generator", gens},
                        {"error_curve_non_increasing", error_curve_non_increasing}};
  doc["recommended_threshold"] = recommended_threshold
                                     ? nlohmann::json(*recommended_threshold)
                                     : nlohmann::json();
  doc["threshold_recommendation_valid"] =
      error_curve_non_increasing && recommended_threshold.has_value();
  if (auto b = BestGenerator()) doc["best_generator"] = b->generator;
  if (auto w = WorstGenerator()) doc["worst_generator"] = w->generator;
  return doc;
}

absl::StatusOr<MetricEvaluation> EvaluateMetric(
    absl::Span<const LabelRecord> records, absl::string_view metric,
    const CurveOptions& options) {
  if (!IsMetricName(metric)) {
    return absl::NotFoundError(absl::StrCat("unknown metric '", metric, "'"));
  }
  const ScoredRecords scored = ExtractScores(records, metric);
  MetricEvaluation eval;
  eval.metric_name = std::string(metric);
  eval.n_records = scored.scores.size();
  for (int l : scored.labels) eval.n_positive += l == 1 ? 1 : 0;
  if (eval.n_records == 0) {
    return absl::FailedPreconditionError(
        absl::StrCat("degenerate labels: no scored records for '", metric, "'"));
  }
  if (eval.n_positive == 0 || eval.n_positive == eval.n_records) {
    return absl::FailedPreconditionError(absl::StrCat(
        "degenerate labels: every record of '", metric, "' has label ",
        eval.n_positive == 0 ? 0 : 1));
  }
  eval.auc = RocAuc(scored.scores, scored.labels);
  eval.average_precision = AveragePrecision(scored.scores, scored.labels);

  std::map<int, std::pair<std::vector<double>, std::vector<int>>> by_gen;
  for (size_t i = 0; i < scored.scores.size(); ++i) {
    auto& [s, l] = by_gen[scored.generators[i]];
    s.push_back(scored.scores[i]);
    l.push_back(scored.labels[i]);
  }
  for (const auto& [g, sl] : by_gen) {
    eval.per_generator.push_back(
        {g, RocAuc(sl.first, sl.second), AveragePrecision(sl.first, sl.second)});
  }
  eval.curve = ErrorCurve(scored, ThresholdGrid(options.grid_step));
  eval.recommended_threshold = RecommendThreshold(eval.curve, options.max_error);
  eval.error_curve_non_increasing = ErrorCurveNonIncreasing(
      eval.curve, options.monotone_z, options.monotone_min_accepted);
  return eval;
}

nlohmann::json MetricComparison::ToJson() const {
  nlohmann::json evals = nlohmann::json::array();
  for (const MetricEvaluation& e : evaluations) evals.push_back(e.ToJson());
  nlohmann::json ds = nlohmann::json::array();
  for (const Delta& d : deltas) {
    ds.push_back({{"a", d.a},
                  {"b", d.b},
                  {"delta_auc", d.delta_auc},
                  {"delta_ap", d.delta_ap},
                  {"verdict", d.comparable ? "comparable efficacy"
                                           : "different efficacy"}});
  }
  return {{"evaluations", evals}, {"comparisons", ds}};
}

absl::StatusOr<MetricComparison> CompareMetrics(
    absl::Span<const LabelRecord> records,
    absl::Span<const std::string> metric_names, const CurveOptions& options) {
  if (metric_names.size() < 2) {
    return absl::InvalidArgumentError("comparison needs at least two metrics");
  }
  MetricComparison cmp;
  for (const std::string& m : metric_names) {
    absl::StatusOr<MetricEvaluation> e = EvaluateMetric(records, m, options);
    if (!e.ok()) return e.status();
    cmp.evaluations.push_back(*std::move(e));
  }
  for (size_t i = 0; i < cmp.evaluations.size(); ++i) {
    for (size_t j = i + 1; j < cmp.evaluations.size(); ++j) {
      MetricComparison::Delta d;
      d.a = cmp.evaluations[i].metric_name;
      d.b = cmp.evaluations[j].metric_name;
      d.delta_auc = cmp.evaluations[i].auc - cmp.evaluations[j].auc;
      d.delta_ap = cmp.evaluations[i].average_precision -
                   cmp.evaluations[j].average_precision;
      d.comparable = std::abs(d.delta_auc) < 0.05 && std::abs(d.delta_ap) < 0.05;
      cmp.deltas.push_back(d);
    }
  }
  return cmp;
}

ErrorBreakdown BreakdownByPass(absl::Span<const LabelRecord> records,
                               bool passed) {
  ErrorBreakdown b;
  double e1 = 0.0, e2 = 0.0, es = 0.0, ok = 0.0;
  for (const LabelRecord& r : records) {
    if (r.passed_all != passed || r.error_class == ErrorClass::kNoSignal) {
      continue;
    }
    ++b.n;
    switch (r.error_class) {
      case ErrorClass::kTypeI:
        e1 += 1.0;
        break;
      case ErrorClass::kTypeII:
        e2 += 1.0;
        break;
      case ErrorClass::kSignMismatch:
        es += 1.0;
        break;
      default:
        ok += 1.0;
        break;
    }
  }
  if (b.n > 0) {
    b.type1 = e1 / b.n;
    b.type2 = e2 / b.n;
    b.sign_mismatch = es / b.n;
    b.none = ok / b.n;
  }
  return b;
}

absl::Status SimulationConfig::Validate(size_t source_rows) const {
  if (n_generators == 0 || runs_per_generator == 0) {
    return absl::InvalidArgumentError(
        "simulation: n_generators and runs_per_generator must be >= 1");
  }
  if (row_counts.empty() || k_values.empty()) {
    return absl::InvalidArgumentError(
        "simulation: row_counts and k_values must be non-empty");
  }
  for (size_t n : row_counts) {
    if (n > source_rows || n == 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "simulation: row count ", n, " must be in [1, ", source_rows, "]"));
    }
  }
  for (int k : k_values) {
    if (k < 2) return absl::InvalidArgumentError("simulation: every k must be >= 2");
  }
  if (min_quasi_ids < 1 || max_quasi_ids < min_quasi_ids) {
    return absl::InvalidArgumentError(
        "simulation: need 1 <= min_quasi_ids <= max_quasi_ids");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError("simulation: alpha must be in (0, 1)");
  }
  if (absl::Status s = thresholds.Validate(); !s.ok()) return s;
  return ValidateNmiConfig(nmi);
}

namespace {

struct UnitOutput {
  std::vector<LabelRecord> records;
  size_t applications = 0;
  std::vector<std::string> failures;
};

UnitOutput RunUnit(const SyntheticGenerator& generator, const GTreeMap& gtrees,
                   const std::vector<std::string>& qid_pool,
                   const std::string& sensitive, const SimulationConfig& config,
                   int g, int run) {
  UnitOutput out;
  const uint64_t unit_seed = MixSeed(MixSeed(config.seed, g), run);
  Rng rng(unit_seed, 0);
  const size_t n_rows =
      config.row_counts[static_cast<size_t>(rng.Below(config.row_counts.size()))];
  const size_t max_q = std::min(config.max_quasi_ids, qid_pool.size());
  const size_t min_q = std::min(config.min_quasi_ids, max_q);
  const size_t n_q = min_q + static_cast<size_t>(rng.Below(max_q - min_q + 1));
  std::vector<size_t> picks = rng.SampleWithoutReplacement(qid_pool.size(), n_q);
  std::sort(picks.begin(), picks.end());
  std::vector<std::string> qids;
  for (size_t p : picks) qids.push_back(qid_pool[p]);

  auto fail = [&](int k, const absl::Status& s) {
    out.failures.push_back(absl::StrCat("generator ", g, " run ", run, " k ", k,
                                        ": ", s.message()));
  };

  absl::StatusOr<Table> sample = generator.Sample(n_rows, MixSeed(unit_seed, 1));
  if (!sample.ok()) {
    for (int k : config.k_values) fail(k, sample.status());
    out.applications = config.k_values.size();
    return out;
  }
  std::vector<std::string> drop;
  for (const ColumnSchema& c : sample->schema()) {
    if (c.name != sensitive &&
        std::find(qids.begin(), qids.end(), c.name) == qids.end()) {
      drop.push_back(c.name);
    }
  }
  const Table table = sample->DropColumns(drop);
  absl::StatusOr<GTreeMap> trees = ResolveGTrees(table, qids, gtrees);

  for (int k : config.k_values) {
    ++out.applications;
    if (!trees.ok()) {
      fail(k, trees.status());
      continue;
    }
    AnonymizerOptions opts = config.anonymizer;
    opts.k = k;
    absl::StatusOr<AnonymizationResult> result =
        Anonymize(table, qids, *trees, opts);
    if (!result.ok()) {
      fail(k, result.status());
      continue;
    }
    absl::StatusOr<DatasetPair> pair = ToPair(table, *result);
    if (!pair.ok()) {
      fail(k, pair.status());
      continue;
    }
    EvaluateOptions eval_opts;
    eval_opts.nmi = config.nmi;
    eval_opts.nmi.seed = MixSeed(unit_seed, 100 + k);
    absl::StatusOr<MetricReport> report =
        Evaluate(*pair, *result, config.thresholds, eval_opts);
    if (!report.ok()) {
      fail(k, report.status());
      continue;
    }
    LabelOptions label_opts;
    label_opts.alpha = config.alpha;
    label_opts.min_group_size = config.min_group_size;
    std::vector<LabelRecord> batch;
    absl::Status status;
    for (const std::string& q : qids) {
      absl::StatusOr<std::vector<LabelRecord>> labels =
          LabelPair(pair->original, pair->anonymized, q, sensitive, label_opts);
      if (!labels.ok()) {
        status = labels.status();
        break;
      }
      for (LabelRecord& r : *labels) {
        for (const ColumnMetric& m : report->per_column) {
          if (m.column == q && m.value) r.metric_scores[m.metric] = *m.value;
        }
        for (const char* d : {metric::kPctns, metric::kIlm}) {
          if (auto v = report->DatasetValue(d)) r.metric_scores[d] = *v;
        }
        r.generator = g;
        r.run = run;
        r.k = k;
        r.n_rows = n_rows;
        r.passed_all = report->passed;
        batch.push_back(std::move(r));
      }
    }
    if (!status.ok()) {
      fail(k, status);
      continue;
    }
    for (LabelRecord& r : batch) out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace

absl::StatusOr<SimulationResult> RunSimulation(const Table& source,
                                               const GTreeMap& gtrees,
                                               const SimulationConfig& config) {
  if (absl::Status s = config.Validate(source.num_rows()); !s.ok()) return s;
  const std::vector<std::string> sensitive =
      source.ColumnsWithRole(ColumnRole::kSensitiveAttribute);
  if (sensitive.size() != 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "simulation: source needs exactly one sensitive column, found ",
        sensitive.size()));
  }
  const std::vector<std::string> qid_pool =
      source.ColumnsWithRole(ColumnRole::kQuasiIdentifier);
  if (qid_pool.empty()) {
    return absl::InvalidArgumentError("simulation: source has no quasi-identifiers");
  }
  {
    absl::StatusOr<size_t> s = source.ColumnIndex(sensitive[0]);
    if (source.schema()[*s].kind != ColumnKind::kCategorical) {
      return absl::InvalidArgumentError(
          "simulation: the sensitive column must be categorical");
    }
  }

  std::vector<std::unique_ptr<CopulaGenerator>> generators(config.n_generators);
  std::vector<absl::Status> fit_status(config.n_generators);
  ParallelFor(config.n_generators, config.jobs, [&](size_t g) {
    absl::StatusOr<std::unique_ptr<CopulaGenerator>> gen =
        CopulaGenerator::Fit(source, MixSeed(config.seed, 1000 + g));
    if (gen.ok()) {
      generators[g] = *std::move(gen);
    } else {
      fit_status[g] = gen.status();
    }
  });
  for (const absl::Status& s : fit_status) {
    if (!s.ok()) return s;
  }

  const size_t units = config.n_generators * config.runs_per_generator;
  std::vector<UnitOutput> outputs(units);
  ParallelFor(units, config.jobs, [&](size_t u) {
    const int g = static_cast<int>(u / config.runs_per_generator);
    const int run = static_cast<int>(u % config.runs_per_generator);
    outputs[u] = RunUnit(*generators[g], gtrees, qid_pool, sensitive[0], config,
                         g, run);
  });

  SimulationResult result;
  for (UnitOutput& o : outputs) {
    result.applications += o.applications;
    result.failed_applications += o.failures.size();
    for (std::string& f : o.failures) result.failures.push_back(std::move(f));
    for (LabelRecord& r : o.records) result.records.push_back(std::move(r));
  }
  if (result.failed_applications * 10 > result.applications) {
    return absl::InternalError(absl::StrCat(
        "simulation error: ", result.failed_applications, " of ",
        result.applications, " applications failed; first: ",
        result.failures.front()));
  }
  return result;
}

namespace {

std::string Quote(absl::string_view field) {
  if (field.find_first_of(",\"\n") == absl::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string FormatLabelRecords(absl::Span<const LabelRecord> records) {
  const std::vector<std::string>& metrics = AllMetricNames();
  std::string out = absl::StrCat(
      "generator,run,k,n_rows,column,group,label,error_class,passed_all,",
      absl::StrJoin(metrics, ","), "\n");
  for (const LabelRecord& r : records) {
    absl::StrAppend(&out, r.generator, ",", r.run, ",", r.k, ",", r.n_rows, ",",
                    Quote(r.column), ",", Quote(r.group), ",", r.label, ",",
                    ErrorClassName(r.error_class), ",",
                    r.passed_all ? "true" : "false");
    for (const std::string& m : metrics) {
      auto it = r.metric_scores.find(m);
      absl::StrAppend(&out, ",",
                      it == r.metric_scores.end() ? "" : FormatNumber(it->second));
    }
    out += "\n";
  }
  return out;
}

absl::StatusOr<std::vector<LabelRecord>> ParseLabelRecords(
    absl::string_view text) {
  std::vector<absl::string_view> lines = absl::StrSplit(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) return absl::InvalidArgumentError("label file is empty");
  const std::vector<std::string> header = SplitRecord(lines[0], ',');
  constexpr size_t kFixed = 9;
  if (header.size() < kFixed || header[0] != "generator") {
    return absl::InvalidArgumentError("label file: unexpected header");
  }
  std::vector<LabelRecord> records;
  for (size_t li = 1; li < lines.size(); ++li) {
    const std::vector<std::string> f = SplitRecord(lines[li], ',');
    if (f.size() != header.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("label file: line ", li + 1, " has ", f.size(),
                       " fields, expected ", header.size()));
    }
    LabelRecord r;
    int64_t n_rows = 0;
    if (!absl::SimpleAtoi(f[0], &r.generator) || !absl::SimpleAtoi(f[1], &r.run) ||
        !absl::SimpleAtoi(f[2], &r.k) || !absl::SimpleAtoi(f[3], &n_rows) ||
        !absl::SimpleAtoi(f[6], &r.label)) {
      return absl::InvalidArgumentError(
          absl::StrCat("label file: bad integer on line ", li + 1));
    }
    r.n_rows = static_cast<size_t>(n_rows);
    r.column = f[4];
    r.group = f[5];
    absl::StatusOr<ErrorClass> e = ParseErrorClass(f[7]);
    if (!e.ok()) return e.status();
    r.error_class = *e;
    r.passed_all = f[8] == "true";
    for (size_t c = kFixed; c < f.size(); ++c) {
      if (f[c].empty()) continue;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f[c].data(), f[c].data() + f[c].size(), v);
      if (ec != std::errc() || ptr != f[c].data() + f[c].size()) {
        return absl::InvalidArgumentError(
            absl::StrCat("label file: bad number '", f[c], "' on line ", li + 1));
      }
      r.metric_scores[header[c]] = v;
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::string FormatCurves(absl::Span<const MetricEvaluation> evaluations) {
  std::string out =
      "metric,threshold,accepted,tpr,fpr,precision,recall,type1_rate,"
      "type2_rate,sign_mismatch_rate,total_error_rate\n";
  for (const MetricEvaluation& e : evaluations) {
    for (const CurvePoint& p : e.curve) {
      absl::StrAppend(&out, e.metric_name, ",", FormatNumber(p.threshold), ",",
                      p.accepted, ",", FormatNumber(p.tpr), ",",
                      FormatNumber(p.fpr), ",", FormatNumber(p.precision), ",",
                      FormatNumber(p.recall), ",", FormatNumber(p.type1_rate),
                      ",", FormatNumber(p.type2_rate), ",",
                      FormatNumber(p.sign_mismatch_rate), ",",
                      FormatNumber(p.total_error_rate()), "\n");
    }
  }
  return out;
}

}  // namespace dqm
