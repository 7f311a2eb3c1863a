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

#include "dqm/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "dqm/synthetic.h"
#include "nlohmann/json.hpp"

namespace dqm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

absl::StatusOr<std::string> ReadFile(const std::string& path,
                                     absl::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat(what, " not found: ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteFile(const fs::path& path, absl::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::UnavailableError(absl::StrCat("cannot write ", path.string()));
  }
  out << content;
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path.string()));
  return absl::OkStatus();
}

std::string Resolve(const std::string& base, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute() || base.empty()) return path;
  return (fs::path(base) / path).string();
}

absl::StatusOr<json> ParseJson(absl::string_view text, absl::string_view what) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(what, " is not valid JSON"));
  }
  return doc;
}

absl::StatusOr<std::vector<ColumnSchema>> SchemaFromJson(const json& doc) {
  if (!doc.is_array()) {
    return absl::InvalidArgumentError("schema must be a list of columns");
  }
  std::vector<ColumnSchema> schema;
  for (const json& c : doc) {
    if (!c.is_object() || !c.contains("name") || !c["name"].is_string()) {
      return absl::InvalidArgumentError("schema column needs a string 'name'");
    }
    ColumnSchema col;
    col.name = c["name"].get<std::string>();
    absl::StatusOr<ColumnKind> kind =
        ParseColumnKind(c.value("kind", std::string("numerical")));
    if (!kind.ok()) return kind.status();
    col.kind = *kind;
    absl::StatusOr<ColumnRole> role =
        ParseColumnRole(c.value("role", std::string("quasi_identifier")));
    if (!role.ok()) return role.status();
    col.role = *role;
    schema.push_back(std::move(col));
  }
  return schema;
}

json SchemaToJson(const std::vector<ColumnSchema>& schema) {
  json doc = json::array();
  for (const ColumnSchema& c : schema) {
    doc.push_back({{"name", c.name},
                   {"kind", ColumnKindName(c.kind)},
                   {"role", ColumnRoleName(c.role)}});
  }
  return doc;
}

template <typename T>
void Take(const json& obj, const char* key, T& dst) {
  if (obj.contains(key) && !obj[key].is_null()) dst = obj[key].get<T>();
}

absl::Status ApplyConfig(const json& doc, RunConfig& cfg) {
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  if (doc.contains("schema")) {
    const json& s = doc["schema"];
    json schema_doc = s;
    if (s.is_string()) {
      const std::string path = Resolve(cfg.base_dir, s.get<std::string>());
      absl::StatusOr<std::string> text = ReadFile(path, "schema");
      if (!text.ok()) return text.status();
      absl::StatusOr<json> parsed = ParseJson(*text, "schema");
      if (!parsed.ok()) return parsed.status();
      schema_doc = *parsed;
    }
    absl::StatusOr<std::vector<ColumnSchema>> schema = SchemaFromJson(schema_doc);
    if (!schema.ok()) return schema.status();
    cfg.schema = *std::move(schema);
  }
  if (doc.contains("delimiter")) {
    const std::string d = doc["delimiter"].get<std::string>();
    if (d.size() != 1) {
      return absl::InvalidArgumentError("delimiter must be one character");
    }
    cfg.csv.delimiter = d[0];
  }
  Take(doc, "id_column", cfg.csv.id_column);
  if (doc.contains("gtrees")) {
    if (!doc["gtrees"].is_object()) {
      return absl::InvalidArgumentError("gtrees must map column names to trees");
    }
    for (const auto& [column, tree_doc] : doc["gtrees"].items()) {
      json t = tree_doc;
      if (tree_doc.is_string()) {
        absl::StatusOr<std::string> text = ReadFile(
            Resolve(cfg.base_dir, tree_doc.get<std::string>()), "g-tree");
        if (!text.ok()) return text.status();
        absl::StatusOr<json> parsed = ParseJson(*text, "g-tree");
        if (!parsed.ok()) return parsed.status();
        t = *parsed;
      }
      absl::StatusOr<GTree> tree = GTree::FromJson(t);
      if (!tree.ok()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "g-tree for '", column, "': ", tree.status().message()));
      }
      const std::vector<std::string> problems = tree->Validate();
      if (!problems.empty()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "g-tree for '", column, "': ", absl::StrJoin(problems, "; ")));
      }
      cfg.gtrees.insert_or_assign(column, *std::move(tree));
    }
  }
  if (doc.contains("thresholds")) {
    absl::StatusOr<ThresholdConfig> t = ThresholdConfig::FromJson(doc["thresholds"]);
    if (!t.ok()) return t.status();
    cfg.thresholds = *t;
  }
  if (doc.contains("nmi")) {
    const json& n = doc["nmi"];
    Take(n, "sample_size", cfg.nmi.sample_size);
    Take(n, "n_repeats", cfg.nmi.n_repeats);
    Take(n, "knn_k", cfg.nmi.knn_k);
  }
  if (doc.contains("anonymizer")) {
    const json& a = doc["anonymizer"];
    Take(a, "k", cfg.anonymizer.k);
    Take(a, "max_suppression_frac", cfg.anonymizer.max_suppression_frac);
    Take(a, "generalization_limit", cfg.anonymizer.generalization_limit);
    Take(a, "outlier_quantile", cfg.anonymizer.outlier_quantile);
  }
  Take(doc, "seed", cfg.seed);
  Take(doc, "jobs", cfg.jobs);
  Take(doc, "out_dir", cfg.out_dir);
  Take(doc, "alpha", cfg.alpha);
  if (doc.contains("metrics")) {
    const json& m = doc["metrics"];
    std::optional<std::string> path;
    Take(m, "original", path);
    if (path) cfg.original = Resolve(cfg.base_dir, *path);
    path.reset();
    Take(m, "anonymized", path);
    if (path) cfg.anonymized = Resolve(cfg.base_dir, *path);
  }
  if (doc.contains("anonymize")) {
    std::optional<std::string> path;
    Take(doc["anonymize"], "input", path);
    if (path) cfg.input = Resolve(cfg.base_dir, *path);
  }
  if (doc.contains("justify")) {
    const json& j = doc["justify"];
    std::optional<std::string> path;
    Take(j, "source", path);
    if (path) cfg.source = Resolve(cfg.base_dir, *path);
    Take(j, "synthetic_rows", cfg.synthetic_rows);
    Take(j, "n_generators", cfg.simulation.n_generators);
    Take(j, "runs_per_generator", cfg.simulation.runs_per_generator);
    Take(j, "row_counts", cfg.simulation.row_counts);
    Take(j, "k_values", cfg.simulation.k_values);
    Take(j, "min_quasi_ids", cfg.simulation.min_quasi_ids);
    Take(j, "max_quasi_ids", cfg.simulation.max_quasi_ids);
    Take(j, "min_group_size", cfg.simulation.min_group_size);
    Take(j, "metrics", cfg.metrics);
    Take(j, "grid_step", cfg.curves.grid_step);
    Take(j, "max_error", cfg.curves.max_error);
    Take(j, "monotone_z", cfg.curves.monotone_z);
    Take(j, "monotone_min_accepted", cfg.curves.monotone_min_accepted);
  }
  if (doc.contains("minimize")) {
    const json& m = doc["minimize"];
    std::optional<std::string> path;
    Take(m, "input", path);
    if (path) cfg.input = Resolve(cfg.base_dir, *path);
    Take(m, "n", cfg.sensitivity.n_min);
    Take(m, "step_frac", cfg.sensitivity.step_frac);
    Take(m, "m_subsamples", cfg.sensitivity.m_subsamples);
    Take(m, "max_size_factor", cfg.sensitivity.max_size_factor);
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<std::string>> ParseMetricList(absl::string_view text) {
  std::vector<std::string> names;
  for (absl::string_view part : absl::StrSplit(text, ',', absl::SkipWhitespace())) {
    std::string name(absl::StripAsciiWhitespace(part));
    if (!IsMetricName(name)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "unknown metric '", name, "'; known: ",
          absl::StrJoin(AllMetricNames(), ",")));
    }
    names.push_back(std::move(name));
  }
  if (names.empty()) return absl::InvalidArgumentError("--metrics is empty");
  return names;
}

}  // namespace

absl::StatusOr<RunConfig> LoadRunConfig(const Overrides& overrides) {
  RunConfig cfg;
  if (overrides.config) {
    absl::StatusOr<std::string> text = ReadFile(*overrides.config, "config");
    if (!text.ok()) return text.status();
    absl::StatusOr<json> doc = ParseJson(*text, "config");
    if (!doc.ok()) return doc.status();
    cfg.base_dir = fs::path(*overrides.config).parent_path().string();
    try {
      if (absl::Status s = ApplyConfig(*doc, cfg); !s.ok()) return s;
    } catch (const json::exception& e) {
      return absl::InvalidArgumentError(absl::StrCat("config: ", e.what()));
    }
  }
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.jobs) cfg.jobs = *overrides.jobs;
  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
  if (overrides.k) cfg.anonymizer.k = *overrides.k;
  if (overrides.n) cfg.sensitivity.n_min = *overrides.n;
  if (overrides.alpha) cfg.alpha = *overrides.alpha;
  if (overrides.metrics) {
    absl::StatusOr<std::vector<std::string>> m = ParseMetricList(*overrides.metrics);
    if (!m.ok()) return m.status();
    cfg.metrics = *std::move(m);
  }
  for (const std::string& m : cfg.metrics) {
    if (!IsMetricName(m)) {
      return absl::InvalidArgumentError(absl::StrCat("unknown metric '", m, "'"));
    }
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    return absl::InvalidArgumentError("alpha must be in (0, 1)");
  }
  if (cfg.anonymizer.k < 2) return absl::InvalidArgumentError("k must be >= 2");
  if (absl::Status s = cfg.thresholds.Validate(); !s.ok()) return s;
  if (absl::Status s = ValidateNmiConfig(cfg.nmi); !s.ok()) return s;

  cfg.nmi.seed = cfg.seed;
  cfg.simulation.seed = cfg.seed;
  cfg.simulation.jobs = cfg.jobs;
  cfg.simulation.alpha = cfg.alpha;
  cfg.simulation.thresholds = cfg.thresholds;
  cfg.simulation.nmi = cfg.nmi;
  const int sim_k = cfg.simulation.anonymizer.k;
  cfg.simulation.anonymizer = cfg.anonymizer;
  cfg.simulation.anonymizer.k = sim_k;
  cfg.sensitivity.anonymizer = cfg.anonymizer;
  cfg.sensitivity.thresholds = cfg.thresholds;
  cfg.sensitivity.evaluation.nmi = cfg.nmi;
  cfg.sensitivity.seed = cfg.seed;
  cfg.sensitivity.jobs = cfg.jobs;
  return cfg;
}

namespace {

class Command {
 public:
  Command(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  int Fail(int code, const absl::Status& status, std::ostream& err) {
    err << "dqm: " << status.message() << "\n";
    return code;
  }

  absl::Status PrepareOutDir() {
    std::error_code ec;
    fs::create_directories(cfg_.out_dir, ec);
    if (ec) {
      return absl::UnavailableError(
          absl::StrCat("cannot create ", cfg_.out_dir, ": ", ec.message()));
    }
    return absl::OkStatus();
  }

  fs::path Out(absl::string_view name) const {
    return fs::path(cfg_.out_dir) / std::string(name);
  }

  absl::Status RequireSchema() const {
    if (cfg_.schema.empty()) {
      return absl::InvalidArgumentError(
          "schema not found: the config must define 'schema'");
    }
    return absl::OkStatus();
  }

  std::vector<std::string> QuasiIds() const {
    std::vector<std::string> q;
    for (const ColumnSchema& c : cfg_.schema) {
      if (c.role == ColumnRole::kQuasiIdentifier) q.push_back(c.name);
    }
    return q;
  }

  std::vector<ColumnSchema> AnonymizedSchema() const {
    std::vector<ColumnSchema> s;
    for (const ColumnSchema& c : cfg_.schema) {
      if (c.role != ColumnRole::kSensitiveAttribute) s.push_back(c);
    }
    return s;
  }

  absl::Status WriteAnonymization(const DatasetPair& pair,
                                  const AnonymizationResult& result) {
    if (absl::Status s = WriteFile(Out("anonymized.csv"),
                                   FormatTable(pair.anonymized, cfg_.csv));
        !s.ok()) {
      return s;
    }
    std::string manifest = absl::StrCat(cfg_.csv.id_column, "\n");
    for (RowId id : result.suppressed_row_ids) absl::StrAppend(&manifest, id, "\n");
    return WriteFile(Out("suppressed.csv"), manifest);
  }

  const RunConfig& cfg_;
  std::ostream& out_;
};

int CmdAnonymize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Command cmd(cfg, out);
  if (absl::Status s = cmd.RequireSchema(); !s.ok()) return cmd.Fail(kExitUsage, s, err);
  if (!cfg.input) {
    return cmd.Fail(kExitUsage,
                    absl::InvalidArgumentError("anonymize: no input table given"),
                    err);
  }
  absl::StatusOr<Table> table = LoadTable(*cfg.input, cfg.schema, cfg.csv);
  if (!table.ok()) return cmd.Fail(kExitRuntime, table.status(), err);
  const std::vector<std::string> qids = cmd.QuasiIds();
  absl::StatusOr<GTreeMap> trees = ResolveGTrees(*table, qids, cfg.gtrees);
  if (!trees.ok()) return cmd.Fail(kExitUsage, trees.status(), err);
  absl::StatusOr<AnonymizationResult> result =
      Anonymize(*table, qids, *trees, cfg.anonymizer);
  if (!result.ok()) return cmd.Fail(kExitRuntime, result.status(), err);
  absl::StatusOr<DatasetPair> pair = ToPair(*table, *result);
  if (!pair.ok()) return cmd.Fail(kExitRuntime, pair.status(), err);
  if (absl::Status s = cmd.PrepareOutDir(); !s.ok()) return cmd.Fail(kExitRuntime, s, err);
  if (absl::Status s = cmd.WriteAnonymization(*pair, *result); !s.ok()) {
    return cmd.Fail(kExitRuntime, s, err);
  }
  out << "anonymized " << table->num_rows() << " rows with k=" << cfg.anonymizer.k
      << ": " << result->classes.size() << " classes, "
      << result->suppressed_row_ids.size() << " suppressed\n";
  return kExitOk;
}

int CmdMetrics(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Command cmd(cfg, out);
  if (absl::Status s = cmd.RequireSchema(); !s.ok()) return cmd.Fail(kExitUsage, s, err);
  if (!cfg.original) {
    return cmd.Fail(kExitUsage,
                    absl::InvalidArgumentError("metrics: no original table given"),
                    err);
  }
  absl::StatusOr<Table> original = LoadTable(*cfg.original, cfg.schema, cfg.csv);
  if (!original.ok()) return cmd.Fail(kExitRuntime, original.status(), err);
  const std::vector<std::string> qids = cmd.QuasiIds();
  absl::StatusOr<GTreeMap> trees = ResolveGTrees(*original, qids, cfg.gtrees);
  if (!trees.ok()) return cmd.Fail(kExitUsage, trees.status(), err);
  if (absl::Status s = cmd.PrepareOutDir(); !s.ok()) return cmd.Fail(kExitRuntime, s, err);

  std::optional<AnonymizationResult> result;
  std::optional<DatasetPair> pair;
  if (cfg.anonymized) {
    absl::StatusOr<Table> anonymized =
        LoadTable(*cfg.anonymized, cmd.AnonymizedSchema(), cfg.csv);
    if (!anonymized.ok()) return cmd.Fail(kExitRuntime, anonymized.status(), err);
    absl::StatusOr<AnonymizationResult> r = ReconstructResult(
        *original, *anonymized, qids, *trees, cfg.anonymizer.k);
    if (!r.ok()) return cmd.Fail(kExitRuntime, r.status(), err);
    absl::StatusOr<DatasetPair> p =
        AlignPair(*original, *anonymized, r->SuppressedSet());
    if (!p.ok()) return cmd.Fail(kExitRuntime, p.status(), err);
    result = *std::move(r);
    pair = *std::move(p);
  } else {
    absl::StatusOr<AnonymizationResult> r =
        Anonymize(*original, qids, *trees, cfg.anonymizer);
    if (!r.ok()) return cmd.Fail(kExitRuntime, r.status(), err);
    absl::StatusOr<DatasetPair> p = ToPair(*original, *r);
    if (!p.ok()) return cmd.Fail(kExitRuntime, p.status(), err);
    if (absl::Status s = cmd.WriteAnonymization(*p, *r); !s.ok()) {
      return cmd.Fail(kExitRuntime, s, err);
    }
    result = *std::move(r);
    pair = *std::move(p);
  }
  EvaluateOptions opts;
  opts.nmi = cfg.nmi;
  absl::StatusOr<MetricReport> report =
      Evaluate(*pair, *result, cfg.thresholds, opts);
  if (!report.ok()) return cmd.Fail(kExitRuntime, report.status(), err);
  if (absl::Status s = WriteFile(cmd.Out("metrics_report.json"),
                                 report->ToJson().dump(2) + "\n");
      !s.ok()) {
    return cmd.Fail(kExitRuntime, s, err);
  }
  if (absl::Status s = WriteFile(cmd.Out("metrics_report.csv"),
                                 report->ToCsv(cfg.thresholds));
      !s.ok()) {
    return cmd.Fail(kExitRuntime, s, err);
  }
  for (const auto& [metric, value] : report->dataset_level) {
    out << metric << " = " << FormatNumber(value) << "\n";
  }
  for (const std::string& w : report->warnings) out << "warning: " << w << "\n";
  for (const Failure& f : report->failures) {
    out << "FAIL " << f.metric << " (" << f.scope << ") " << FormatNumber(f.value)
        << " < " << FormatNumber(f.threshold) << "\n";
  }
  out << (report->passed ? "passed" : "failed") << "\n";
  return report->passed ? kExitOk : kExitQualityFail;
}

json BreakdownJson(const ErrorBreakdown& b) {
  return {{"n", b.n},
          {"type1", b.type1},
          {"type2", b.type2},
          {"sign_mismatch", b.sign_mismatch},
          {"no_errors", b.none}};
}

int CmdJustify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Command cmd(cfg, out);
  Table source;
  GTreeMap gtrees = cfg.gtrees;
  if (cfg.source) {
    if (absl::Status s = cmd.RequireSchema(); !s.ok()) {
      return cmd.Fail(kExitUsage, s, err);
    }
    absl::StatusOr<Table> t = LoadTable(*cfg.source, cfg.schema, cfg.csv);
    if (!t.ok()) return cmd.Fail(kExitRuntime, t.status(), err);
    source = *std::move(t);
  } else {
    absl::StatusOr<Table> t = AdultLikeSource(cfg.synthetic_rows, cfg.seed);
    if (!t.ok()) return cmd.Fail(kExitRuntime, t.status(), err);
    source = *std::move(t);
    if (gtrees.empty()) gtrees = AdultLikeGTrees();
  }
  if (absl::Status s = cfg.simulation.Validate(source.num_rows()); !s.ok()) {
    return cmd.Fail(kExitUsage, s, err);
  }
  absl::StatusOr<SimulationResult> sim = RunSimulation(source, gtrees, cfg.simulation);
  if (!sim.ok()) return cmd.Fail(kExitRuntime, sim.status(), err);
  if (absl::Status s = cmd.PrepareOutDir(); !s.ok()) return cmd.Fail(kExitRuntime, s, err);
  if (absl::Status s = WriteFile(cmd.Out("labels.csv"), FormatLabelRecords(sim->records));
      !s.ok()) {
    return cmd.Fail(kExitRuntime, s, err);
  }
  std::vector<MetricEvaluation> evals;
  for (const std::string& m : cfg.metrics) {
    absl::StatusOr<MetricEvaluation> e = EvaluateMetric(sim->records, m, cfg.curves);
    if (!e.ok()) return cmd.Fail(kExitRuntime, e.status(), err);
    evals.push_back(*std::move(e));
  }
  json evals_doc = json::array();
  for (const MetricEvaluation& e : evals) evals_doc.push_back(e.ToJson());
  json summary = {{"applications", sim->applications},
                  {"failed_applications", sim->failed_applications},
                  {"records", sim->records.size()},
                  {"passed_thresholds", BreakdownJson(BreakdownByPass(sim->records, true))},
                  {"failed_thresholds", BreakdownJson(BreakdownByPass(sim->records, false))},
                  {"failures", sim->failures}};
  absl::Status s = WriteFile(cmd.Out("evaluations.json"), evals_doc.dump(2) + "\n");
  if (s.ok()) s = WriteFile(cmd.Out("curves.csv"), FormatCurves(evals));
  if (s.ok()) s = WriteFile(cmd.Out("summary.json"), summary.dump(2) + "\n");
  if (s.ok() && cfg.metrics.size() >= 2) {
    absl::StatusOr<MetricComparison> cmp =
        CompareMetrics(sim->records, cfg.metrics, cfg.curves);
    if (!cmp.ok()) return cmd.Fail(kExitRuntime, cmp.status(), err);
    s = WriteFile(cmd.Out("comparison.json"), cmp->ToJson().dump(2) + "\n");
    for (const MetricComparison::Delta& d : cmp->deltas) {
      out << d.a << " vs " << d.b << ": delta AUC " << FormatNumber(d.delta_auc)
          << ", delta AP " << FormatNumber(d.delta_ap) << " ("
          << (d.comparable ? "comparable" : "different") << ")\n";
    }
  }
  if (!s.ok()) return cmd.Fail(kExitRuntime, s, err);
  out << sim->applications << " applications, " << sim->records.size()
      << " label records\n";
  for (const MetricEvaluation& e : evals) {
    out << e.metric_name << ": AUC " << FormatNumber(e.auc) << ", AP "
        << FormatNumber(e.average_precision) << ", recommended threshold "
        << (e.recommended_threshold ? FormatNumber(*e.recommended_threshold)
                                    : std::string("none"))
        << (e.error_curve_non_increasing ? "" : " (error curve not monotone)")
        << "\n";
  }
  return kExitOk;
}

int CmdMinimize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Command cmd(cfg, out);
  if (absl::Status s = cmd.RequireSchema(); !s.ok()) return cmd.Fail(kExitUsage, s, err);
  if (!cfg.input) {
    return cmd.Fail(kExitUsage,
                    absl::InvalidArgumentError("minimize: no input table given"), err);
  }
  if (cfg.sensitivity.n_min == 0) {
    return cmd.Fail(kExitUsage, absl::InvalidArgumentError("minimize: --n is required"),
                    err);
  }
  absl::StatusOr<Table> table = LoadTable(*cfg.input, cfg.schema, cfg.csv);
  if (!table.ok()) return cmd.Fail(kExitRuntime, table.status(), err);
  absl::StatusOr<SensitivityReport> report =
      SensitivityAnalysis(*table, cmd.QuasiIds(), cfg.gtrees, cfg.sensitivity);
  if (!report.ok()) return cmd.Fail(kExitRuntime, report.status(), err);
  if (absl::Status s = cmd.PrepareOutDir(); !s.ok()) return cmd.Fail(kExitRuntime, s, err);
  std::string ids = absl::StrCat(cfg.csv.id_column, "\n");
  for (RowId id : report->confirmation_row_ids) absl::StrAppend(&ids, id, "\n");
  absl::Status s = WriteFile(cmd.Out("sensitivity_report.json"),
                             report->ToJson().dump(2) + "\n");
  if (s.ok()) s = EmitSensitivityPlotData(*report, cmd.Out("sensitivity_plot.csv").string());
  if (s.ok()) s = WriteFile(cmd.Out("analysis_sample_ids.csv"), ids);
  if (!s.ok()) return cmd.Fail(kExitRuntime, s, err);
  for (size_t size : report->sizes) {
    const std::string& summary = report->failure_summary.at(size);
    out << size << ": " << (summary.empty() ? "pass" : summary) << "\n";
  }
  if (report->minimum_passing_size) {
    out << "minimum passing size: " << *report->minimum_passing_size
        << " (analysis sample " << (report->confirmation->passed ? "passes" : "FAILS")
        << ")\n";
  } else {
    out << "no size in [n, " << report->sizes.back() << "] passes every sub-sample\n";
  }
  return kExitOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Data quality metrics for k-anonymized tables", "dqm"};
  app.require_subcommand(1);
  Overrides o;
  std::vector<std::string> positional;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration")
        ->envname("DQM_CONFIG");
    sub->add_option("--seed", o.seed, "Seed for every random stream")
        ->envname("DQM_SEED");
    sub->add_option("--jobs", o.jobs, "Worker threads (0: all cores)")
        ->envname("DQM_JOBS");
    sub->add_option("--out-dir", o.out_dir, "Output directory")
        ->envname("DQM_OUT_DIR");
    sub->add_option("--k", o.k, "k of k-anonymity")->envname("DQM_K");
    sub->add_option("--n", o.n, "Required analysis sample size")
        ->envname("DQM_N");
    sub->add_option("--metrics", o.metrics, "Comma-separated metric names")
        ->envname("DQM_METRICS");
    sub->add_option("--alpha", o.alpha, "Significance level")
        ->envname("DQM_ALPHA");
  };
  CLI::App* metrics = app.add_subcommand(
      "metrics", "Score an anonymized table (or anonymize with --k) against the original");
  metrics->add_option("tables", positional, "ORIGINAL [ANONYMIZED]")->expected(0, 2);
  CLI::App* anonymize = app.add_subcommand("anonymize", "k-anonymize a table");
  anonymize->add_option("input", positional, "Input table")->expected(0, 1);
  CLI::App* justify = app.add_subcommand(
      "justify", "Simulate anonymizations and evaluate metrics as classifiers");
  justify->add_option("source", positional, "Source table (default: synthetic)")
      ->expected(0, 1);
  CLI::App* minimize = app.add_subcommand(
      "minimize", "Find the smallest sample size in [n, 2n] that passes");
  minimize->add_option("input", positional, "Input table")->expected(0, 1);
  for (CLI::App* sub : {metrics, anonymize, justify, minimize}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  absl::StatusOr<RunConfig> cfg = LoadRunConfig(o);
  if (!cfg.ok()) {
    err << "dqm: " << cfg.status().message() << "\n";
    return kExitUsage;
  }
  if (metrics->parsed()) {
    if (!positional.empty()) cfg->original = positional[0];
    if (positional.size() > 1) cfg->anonymized = positional[1];
    return CmdMetrics(*cfg, out, err);
  }
  if (anonymize->parsed()) {
    if (!positional.empty()) cfg->input = positional[0];
    return CmdAnonymize(*cfg, out, err);
  }
  if (justify->parsed()) {
    if (!positional.empty()) cfg->source = positional[0];
    return CmdJustify(*cfg, out, err);
  }
  if (!positional.empty()) cfg->input = positional[0];
  return CmdMinimize(*cfg, out, err);
}

}  // namespace dqm::cli
