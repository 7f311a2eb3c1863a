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

#include "dqm/quality_metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "dqm/random.h"

namespace dqm {

namespace {

absl::StatusOr<size_t> QidIndex(const AnonymizationResult& result,
                                absl::string_view column) {
  for (size_t q = 0; q < result.quasi_ids.size(); ++q) {
    if (result.quasi_ids[q] == column) return q;
  }
  return absl::NotFoundError(
      absl::StrCat("column '", column, "' is not a quasi-identifier"));
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void Add(double v) {
    if (IsMissing(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double Spread() const { return hi > lo ? hi - lo : 0.0; }
};

// Sum over classes of |e| * spread(e) / spread(O) for one numerical column.
absl::StatusOr<double> WeightedNumericalLoss(const Table& original,
                                             const AnonymizationResult& result,
                                             absl::string_view column) {
  absl::StatusOr<absl::Span<const double>> values = original.Numeric(column);
  if (!values.ok()) return values.status();
  Range whole;
  for (double v : *values) whole.Add(v);
  const double perim_o = whole.Spread();
  if (perim_o <= 0.0) return 0.0;
  double total = 0.0;
  for (const EquivalenceClass& e : result.classes) {
    Range r;
    for (RowId id : e.row_ids) {
      std::optional<size_t> pos = original.PositionOf(id);
      if (!pos.has_value()) {
        return absl::InvalidArgumentError(
            absl::StrCat("row id ", id, " of the result is not in the table"));
      }
      r.Add((*values)[*pos]);
    }
    total += e.row_ids.size() * (r.Spread() / perim_o);
  }
  return total;
}

bool Gates(absl::string_view metric, const ThresholdConfig& t) {
  return t.For(metric).has_value() || metric == metric::kRilmCategorical;
}

}  // namespace

const std::vector<std::string>& AllMetricNames() {
  static const auto* names = new std::vector<std::string>{
      metric::kPearson, metric::kRilmNumerical, metric::kRilmCategorical,
      metric::kNmiv1,   metric::kNmiv2,         metric::kPctns,
      metric::kIlm};
  return *names;
}

bool IsMetricName(absl::string_view name) {
  const std::vector<std::string>& names = AllMetricNames();
  return std::find(names.begin(), names.end(), name) != names.end();
}

absl::Status ThresholdConfig::Validate() const {
  auto check = [](absl::string_view what, double v) -> absl::Status {
    if (!(v >= 0.0 && v <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("threshold ", what, " = ", v, " is outside [0, 1]"));
    }
    return absl::OkStatus();
  };
  for (auto [name, v] : {std::pair<absl::string_view, double>{"pearson", pearson_min},
                         {"rilm_categorical", rilm_categorical_min},
                         {"nmiv1", nmiv1_min},
                         {"pctns", pctns_min}}) {
    if (absl::Status s = check(name, v); !s.ok()) return s;
  }
  if (rilm_numerical_min) {
    if (absl::Status s = check("rilm_numerical", *rilm_numerical_min); !s.ok())
      return s;
  }
  if (nmiv2_min) {
    if (absl::Status s = check("nmiv2", *nmiv2_min); !s.ok()) return s;
  }
  for (const auto& [column, v] : rilm_categorical_special) {
    if (absl::Status s = check(absl::StrCat("rilm_categorical[", column, "]"), v);
        !s.ok())
      return s;
  }
  return absl::OkStatus();
}

std::optional<double> ThresholdConfig::For(absl::string_view metric,
                                           absl::string_view column) const {
  if (metric == metric::kPearson) return pearson_min;
  if (metric == metric::kNmiv1) return nmiv1_min;
  if (metric == metric::kPctns) return pctns_min;
  if (metric == metric::kRilmNumerical) return rilm_numerical_min;
  if (metric == metric::kNmiv2) return nmiv2_min;
  if (metric == metric::kRilmCategorical) {
    auto it = rilm_categorical_special.find(std::string(column));
    return it != rilm_categorical_special.end() ? it->second
                                                : rilm_categorical_min;
  }
  return std::nullopt;
}

absl::StatusOr<ThresholdConfig> ThresholdConfig::FromJson(
    const nlohmann::json& doc) {
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("thresholds must be an object");
  }
  ThresholdConfig t;
  for (const auto& [key, value] : doc.items()) {
    if (key == "rilm_categorical_special") {
      if (!value.is_object()) {
        return absl::InvalidArgumentError(
            "rilm_categorical_special must map column names to numbers");
      }
      for (const auto& [column, v] : value.items()) {
        if (!v.is_number()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "rilm_categorical_special[", column, "] must be a number"));
        }
        t.rilm_categorical_special[column] = v.get<double>();
      }
      continue;
    }
    if (!value.is_number() && !value.is_null()) {
      return absl::InvalidArgumentError(
          absl::StrCat("threshold '", key, "' must be a number"));
    }
    const std::optional<double> v =
        value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
    if (key == "pearson" && v) {
      t.pearson_min = *v;
    } else if (key == "rilm_categorical" && v) {
      t.rilm_categorical_min = *v;
    } else if (key == "nmiv1" && v) {
      t.nmiv1_min = *v;
    } else if (key == "pctns" && v) {
      t.pctns_min = *v;
    } else if (key == "rilm_numerical") {
      t.rilm_numerical_min = v;
    } else if (key == "nmiv2") {
      t.nmiv2_min = v;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown threshold '", key, "'"));
    }
  }
  if (absl::Status s = t.Validate(); !s.ok()) return s;
  return t;
}

nlohmann::json ThresholdConfig::ToJson() const {
  nlohmann::json doc = {{"pearson", pearson_min},
                        {"rilm_categorical", rilm_categorical_min},
                        {"rilm_categorical_special", rilm_categorical_special},
                        {"nmiv1", nmiv1_min},
                        {"pctns", pctns_min}};
  doc["rilm_numerical"] =
      rilm_numerical_min ? nlohmann::json(*rilm_numerical_min) : nlohmann::json();
  doc["nmiv2"] = nmiv2_min ? nlohmann::json(*nmiv2_min) : nlohmann::json();
  return doc;
}

std::optional<double> MetricReport::Value(absl::string_view column,
                                          absl::string_view metric) const {
  for (const ColumnMetric& m : per_column) {
    if (m.column == column && m.metric == metric) return m.value;
  }
  return std::nullopt;
}

std::optional<double> MetricReport::DatasetValue(
    absl::string_view metric) const {
  auto it = dataset_level.find(std::string(metric));
  if (it == dataset_level.end()) return std::nullopt;
  return it->second;
}

nlohmann::json MetricReport::ToJson() const {
  nlohmann::json columns = nlohmann::json::array();
  for (const ColumnMetric& m : per_column) {
    nlohmann::json entry = {{"column", m.column}, {"metric", m.metric}};
    entry["value"] = m.value ? nlohmann::json(*m.value) : nlohmann::json();
    if (!m.note.empty()) entry["note"] = m.note;
    columns.push_back(std::move(entry));
  }
  nlohmann::json failed = nlohmann::json::array();
  for (const Failure& f : failures) {
    failed.push_back({{"metric", f.metric},
                      {"scope", f.scope},
                      {"value", f.value},
                      {"threshold", f.threshold}});
  }
  return {{"passed", passed},       {"pctns", pctns},
          {"dataset_level", dataset_level}, {"per_column", columns},
          {"failures", failed},     {"warnings", warnings}};
}

std::string MetricReport::ToCsv(const ThresholdConfig& thresholds) const {
  std::string out = "scope,metric,value,threshold,passed\n";
  auto row = [&](absl::string_view scope, absl::string_view metric,
                 std::optional<double> value, std::optional<double> threshold) {
    std::string verdict;
    if (value && threshold) verdict = *value >= *threshold ? "true" : "false";
    absl::StrAppend(&out, scope, ",", metric, ",",
                    value ? FormatNumber(*value) : "", ",",
                    threshold ? FormatNumber(*threshold) : "", ",", verdict,
                    "\n");
  };
  for (const ColumnMetric& m : per_column) {
    std::optional<double> t;
    if (m.metric == metric::kRilmCategorical) {
      t = thresholds.For(m.metric, m.column);
    }
    row(m.column, m.metric, m.value, t);
  }
  for (const auto& [metric, value] : dataset_level) {
    std::optional<double> t = metric == metric::kRilmCategorical
                                  ? std::optional<double>()
                                  : thresholds.For(metric);
    row("dataset", metric, value, t);
  }
  return out;
}

absl::StatusOr<std::optional<double>> PearsonRho(const DatasetPair& pair,
                                                 absl::string_view column) {
  absl::StatusOr<AlignedValues> v = AlignedNumeric(pair, column);
  if (!v.ok()) return v.status();
  const size_t n = v->original.size();
  if (n < 2) return std::optional<double>();
  double mo = 0.0, ma = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mo += v->original[i];
    ma += v->anonymized[i];
  }
  mo /= n;
  ma /= n;
  double soo = 0.0, saa = 0.0, soa = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double a = v->original[i] - mo;
    const double b = v->anonymized[i] - ma;
    soo += a * a;
    saa += b * b;
    soa += a * b;
  }
  if (soo <= 0.0 || saa <= 0.0) return std::optional<double>();
  const double r = soa / std::sqrt(soo * saa);
  return std::optional<double>(std::clamp(r, 0.0, 1.0));
}

absl::StatusOr<std::optional<double>> RilmNumerical(
    const Table& original, const AnonymizationResult& result,
    absl::string_view column) {
  if (absl::StatusOr<size_t> q = QidIndex(result, column); !q.ok()) {
    return q.status();
  }
  const size_t n_a = result.num_anonymized();
  if (n_a == 0) return std::optional<double>();
  absl::StatusOr<double> loss = WeightedNumericalLoss(original, result, column);
  if (!loss.ok()) return loss.status();
  return std::optional<double>(std::clamp(1.0 - *loss / n_a, 0.0, 1.0));
}

absl::StatusOr<std::optional<double>> RilmCategorical(
    const AnonymizationResult& result, absl::string_view column) {
  absl::StatusOr<size_t> q = QidIndex(result, column);
  if (!q.ok()) return q.status();
  auto tree = result.gtrees.find(std::string(column));
  if (tree == result.gtrees.end()) {
    return absl::NotFoundError(
        absl::StrCat("no g-tree for column '", column, "'"));
  }
  const size_t n_a = result.num_anonymized();
  if (n_a == 0) return std::optional<double>();
  const double perim_o = tree->second.root_size();
  if (perim_o <= 0.0) return std::optional<double>(1.0);
  double total = 0.0;
  for (const EquivalenceClass& e : result.classes) {
    const GTree::NodeId node = e.values[*q].node;
    if (node < 0 || static_cast<size_t>(node) >= tree->second.num_nodes()) {
      return absl::InvalidArgumentError(
          absl::StrCat("class node ", node, " is not in the g-tree of '",
                       column, "'"));
    }
    total += e.row_ids.size() * (tree->second.node(node).size / perim_o);
  }
  return std::optional<double>(std::clamp(1.0 - total / n_a, 0.0, 1.0));
}

absl::StatusOr<double> Pctns(const AnonymizationResult& result,
                             size_t n_original) {
  if (n_original == 0) {
    return absl::InvalidArgumentError("PCTNS needs at least one original row");
  }
  return static_cast<double>(result.num_anonymized()) / n_original;
}

absl::StatusOr<std::optional<double>> IlmRaw(const Table& original,
                                             const AnonymizationResult& result) {
  const size_t n_a = result.num_anonymized();
  double total = 0.0;
  size_t numerical = 0;
  for (const std::string& column : result.quasi_ids) {
    absl::StatusOr<size_t> index = original.ColumnIndex(column);
    if (!index.ok()) return index.status();
    if (original.schema()[*index].kind != ColumnKind::kNumerical) continue;
    ++numerical;
    absl::StatusOr<double> loss =
        WeightedNumericalLoss(original, result, column);
    if (!loss.ok()) return loss.status();
    total += *loss;
  }
  if (numerical == 0 || n_a == 0) return std::optional<double>();
  return std::optional<double>(total / n_a);
}

absl::StatusOr<std::optional<double>> IlmScore(
    const Table& original, const AnonymizationResult& result) {
  absl::StatusOr<std::optional<double>> raw = IlmRaw(original, result);
  if (!raw.ok() || !raw->has_value()) return raw;
  size_t numerical = 0;
  for (const std::string& column : result.quasi_ids) {
    if (original.schema()[*original.ColumnIndex(column)].kind ==
        ColumnKind::kNumerical) {
      ++numerical;
    }
  }
  return std::optional<double>(
      std::clamp(1.0 - **raw / numerical, 0.0, 1.0));
}

absl::StatusOr<MetricReport> Evaluate(const DatasetPair& pair,
                                      const AnonymizationResult& result,
                                      const ThresholdConfig& thresholds,
                                      const EvaluateOptions& options) {
  if (absl::Status s = thresholds.Validate(); !s.ok()) return s;
  if (options.compute_nmi) {
    if (absl::Status s = ValidateNmiConfig(options.nmi); !s.ok()) return s;
  }
  MetricReport report;
  absl::StatusOr<double> pctns = Pctns(result, pair.original.num_rows());
  if (!pctns.ok()) return pctns.status();
  report.pctns = *pctns;

  auto is_qid = [&](const std::string& name) {
    return std::find(result.quasi_ids.begin(), result.quasi_ids.end(), name) !=
           result.quasi_ids.end();
  };
  auto add = [&](const std::string& column, const char* metric,
                 std::optional<double> value) {
    report.per_column.push_back({column, metric, value, ""});
    if (!value) {
      report.per_column.back().note = "not applicable";
      report.warnings.push_back(
          absl::StrCat(metric, " is not applicable to column '", column, "'"));
    }
  };

  const std::vector<ColumnSchema>& schema = pair.anonymized.schema();
  for (size_t c = 0; c < schema.size(); ++c) {
    const ColumnSchema& col = schema[c];
    if (col.kind == ColumnKind::kNumerical) {
      absl::StatusOr<std::optional<double>> rho = PearsonRho(pair, col.name);
      if (!rho.ok()) return rho.status();
      add(col.name, metric::kPearson, *rho);
      if (options.compute_nmi) {
        absl::StatusOr<AlignedValues> values = AlignedNumeric(pair, col.name);
        if (!values.ok()) return values.status();
        NmiConfig cfg = options.nmi;
        cfg.seed = MixSeed(options.nmi.seed, c);
        absl::StatusOr<NmiScores> nmi = SampledScaledNmiBoth(*values, cfg);
        if (!nmi.ok()) return nmi.status();
        add(col.name, metric::kNmiv1, nmi->v1.value);
        add(col.name, metric::kNmiv2, nmi->v2.value);
      }
      if (is_qid(col.name)) {
        absl::StatusOr<std::optional<double>> rilm =
            RilmNumerical(pair.original, result, col.name);
        if (!rilm.ok()) return rilm.status();
        add(col.name, metric::kRilmNumerical, *rilm);
      }
    } else if (is_qid(col.name)) {
      absl::StatusOr<std::optional<double>> rilm =
          RilmCategorical(result, col.name);
      if (!rilm.ok()) return rilm.status();
      add(col.name, metric::kRilmCategorical, *rilm);
      auto tree = result.gtrees.find(col.name);
      if (tree != result.gtrees.end() && tree->second.root_size() <= 0.0) {
        report.warnings.push_back(absl::StrCat(
            "g-tree root size of '", col.name, "' is 0; every RIL is 0"));
      }
    }
  }

  for (const ColumnMetric& m : report.per_column) {
    if (!m.value) continue;
    auto [it, inserted] = report.dataset_level.emplace(m.metric, *m.value);
    if (!inserted) it->second = std::min(it->second, *m.value);
  }
  report.dataset_level[metric::kPctns] = report.pctns;
  absl::StatusOr<std::optional<double>> ilm = IlmScore(pair.original, result);
  if (!ilm.ok()) return ilm.status();
  if (ilm->has_value()) report.dataset_level[metric::kIlm] = **ilm;

  for (const std::string& metric : AllMetricNames()) {
    if (!Gates(metric, thresholds)) continue;
    if (metric == metric::kRilmCategorical) {
      for (const ColumnMetric& m : report.per_column) {
        if (m.metric != metric || !m.value) continue;
        const double t = *thresholds.For(metric, m.column);
        if (*m.value < t) {
          report.failures.push_back({metric, m.column, *m.value, t});
        }
      }
      continue;
    }
    std::optional<double> value = report.DatasetValue(metric);
    if (!value) continue;
    const double t = *thresholds.For(metric);
    if (*value < t) report.failures.push_back({metric, "dataset", *value, t});
  }
  report.passed = report.failures.empty();
  return report;
}

}  // namespace dqm
