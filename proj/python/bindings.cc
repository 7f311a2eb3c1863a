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

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "absl/status/statusor.h"
#include "dqm/anonymizer.h"
#include "dqm/cli.h"
#include "dqm/info_theory.h"
#include "dqm/justification.h"
#include "dqm/quality_metrics.h"
#include "dqm/stat_tests.h"
#include "dqm/table.h"
#include "pybind11/pybind11.h"
#include "pybind11/stl.h"

namespace py = pybind11;

namespace dqm {
namespace {

template <typename T>
T Unwrap(absl::StatusOr<T> value) {
  if (!value.ok()) {
    if (absl::IsInvalidArgument(value.status()) ||
        absl::IsFailedPrecondition(value.status())) {
      throw py::value_error(std::string(value.status().message()));
    }
    if (absl::IsNotFound(value.status())) {
      throw py::key_error(std::string(value.status().message()));
    }
    throw std::runtime_error(std::string(value.status().message()));
  }
  return *std::move(value);
}

using SchemaTuple = std::tuple<std::string, std::string, std::string>;

std::vector<ColumnSchema> ToSchema(const std::vector<SchemaTuple>& spec) {
  std::vector<ColumnSchema> schema;
  for (const auto& [name, kind, role] : spec) {
    schema.push_back({name, Unwrap(ParseColumnKind(kind)),
                      Unwrap(ParseColumnRole(role))});
  }
  return schema;
}

// One anonymization: the original, the result and the aligned pair.
struct Anonymized {
  Table original;
  AnonymizationResult result;
  DatasetPair pair;
};

py::dict OutcomeDict(const TestOutcome& t) {
  py::dict d;
  d["statistic"] = t.statistic;
  d["p_value"] = t.p_value;
  d["df"] = t.df;
  d["significant"] = t.significant;
  d["applicable"] = t.applicable;
  d["sign"] = t.sign == Sign::kPositive   ? "positive"
              : t.sign == Sign::kNegative ? "negative"
                                          : "not_applicable";
  return d;
}

ThresholdConfig Thresholds(const std::string& json_text) {
  if (json_text.empty()) return {};
  return Unwrap(ThresholdConfig::FromJson(nlohmann::json::parse(json_text)));
}

}  // namespace
}  // namespace dqm

PYBIND11_MODULE(_core, m) {
  using namespace dqm;
  m.doc() = "Data quality metrics for k-anonymized tables";

  py::class_<Table>(m, "Table")
      .def_static(
          "from_csv",
          [](const std::string& text, const std::vector<SchemaTuple>& schema,
             const std::string& id_column, char delimiter) {
            CsvOptions opts;
            opts.id_column = id_column;
            opts.delimiter = delimiter;
            return Unwrap(ParseTable(text, ToSchema(schema), opts));
          },
          py::arg("text"), py::arg("schema"), py::arg("id_column") = "row_id",
          py::arg("delimiter") = ',')
      .def_property_readonly("num_rows", &Table::num_rows)
      .def_property_readonly("row_ids",
                             [](const Table& t) {
                               return std::vector<RowId>(t.row_ids().begin(),
                                                         t.row_ids().end());
                             })
      .def_property_readonly("column_names",
                             [](const Table& t) {
                               std::vector<std::string> names;
                               for (const ColumnSchema& c : t.schema()) {
                                 names.push_back(c.name);
                               }
                               return names;
                             })
      .def(
          "column",
          [](const Table& t, const std::string& name) -> py::list {
            py::list out;
            for (const Cell& c : Unwrap(ColumnVector(t, name))) {
              if (const auto* d = std::get_if<double>(&c)) {
                out.append(*d);
              } else if (const auto* s = std::get_if<std::string>(&c)) {
                out.append(*s);
              } else {
                out.append(py::none());
              }
            }
            return out;
          },
          py::arg("name"))
      .def(
          "to_csv",
          [](const Table& t, const std::string& id_column) {
            CsvOptions opts;
            opts.id_column = id_column;
            return FormatTable(t, opts);
          },
          py::arg("id_column") = "row_id");

  py::class_<Anonymized>(m, "Anonymization")
      .def_property_readonly("k", [](const Anonymized& a) { return a.result.k; })
      .def_property_readonly(
          "classes",
          [](const Anonymized& a) {
            std::vector<std::vector<RowId>> out;
            for (const EquivalenceClass& e : a.result.classes) {
              out.push_back(e.row_ids);
            }
            return out;
          })
      .def_property_readonly(
          "suppressed", [](const Anonymized& a) { return a.result.suppressed_row_ids; })
      .def_property_readonly(
          "anonymized", [](const Anonymized& a) { return a.pair.anonymized; })
      .def(
          "evaluate",
          [](const Anonymized& a, const std::string& thresholds_json,
             bool compute_nmi, uint64_t seed) {
            EvaluateOptions opts;
            opts.compute_nmi = compute_nmi;
            opts.nmi.seed = seed;
            return Unwrap(Evaluate(a.pair, a.result, Thresholds(thresholds_json),
                                   opts))
                .ToJson()
                .dump();
          },
          py::arg("thresholds_json") = "", py::arg("compute_nmi") = true,
          py::arg("seed") = 0);

  m.def(
      "anonymize",
      [](const Table& table, const std::vector<std::string>& quasi_ids, int k,
         double max_suppression_frac, double generalization_limit,
         double outlier_quantile) {
        AnonymizerOptions opts;
        opts.k = k;
        opts.max_suppression_frac = max_suppression_frac;
        opts.generalization_limit = generalization_limit;
        opts.outlier_quantile = outlier_quantile;
        const GTreeMap trees = Unwrap(ResolveGTrees(table, quasi_ids, {}));
        Anonymized a;
        a.original = table;
        a.result = Unwrap(Anonymize(table, quasi_ids, trees, opts));
        a.pair = Unwrap(ToPair(table, a.result));
        return a;
      },
      py::arg("table"), py::arg("quasi_ids"), py::arg("k"),
      py::arg("max_suppression_frac") = 1.0,
      py::arg("generalization_limit") = 1.0, py::arg("outlier_quantile") = 0.99);

  m.def(
      "estimate_entropy",
      [](const std::vector<double>& values, int k, uint64_t seed) {
        NmiConfig cfg;
        cfg.knn_k = k;
        cfg.seed = seed;
        return Unwrap(EstimateEntropy(values, cfg));
      },
      py::arg("values"), py::arg("k") = 3, py::arg("seed") = 0);
  m.def(
      "estimate_mi",
      [](const std::vector<double>& x, const std::vector<double>& y, int k,
         uint64_t seed) {
        NmiConfig cfg;
        cfg.knn_k = k;
        cfg.seed = seed;
        return Unwrap(EstimateMi(x, y, cfg));
      },
      py::arg("x"), py::arg("y"), py::arg("k") = 3, py::arg("seed") = 0);
  m.def("scale_nmiv1", &ScaleNmiv1, py::arg("n"), py::arg("e"));
  m.def(
      "sampled_nmi",
      [](const std::vector<double>& original, const std::vector<double>& anonymized,
         size_t sample_size, size_t n_repeats, uint64_t seed) {
        NmiConfig cfg;
        cfg.sample_size = sample_size;
        cfg.n_repeats = n_repeats;
        cfg.seed = seed;
        const NmiScores s =
            Unwrap(SampledScaledNmiBoth(AlignedValues{original, anonymized}, cfg));
        return std::make_pair(s.v1.value, s.v2.value);
      },
      py::arg("original"), py::arg("anonymized"), py::arg("sample_size") = 10000,
      py::arg("n_repeats") = 5, py::arg("seed") = 0);

  m.def(
      "welch_t_test",
      [](const std::vector<double>& group, const std::vector<double>& rest,
         double alpha) { return OutcomeDict(WelchTTest(group, rest, alpha)); },
      py::arg("group"), py::arg("rest"), py::arg("alpha") = 0.05);
  m.def(
      "g_test",
      [](const std::vector<std::vector<double>>& counts, double alpha) {
        return OutcomeDict(GTestTable(counts, alpha));
      },
      py::arg("counts"), py::arg("alpha") = 0.05);

  m.def(
      "roc_auc",
      [](const std::vector<double>& scores, const std::vector<int>& labels) {
        return RocAuc(scores, labels);
      },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "average_precision",
      [](const std::vector<double>& scores, const std::vector<int>& labels) {
        return AveragePrecision(scores, labels);
      },
      py::arg("scores"), py::arg("labels"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv = {"dqm"};
        for (const std::string& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::Run(static_cast<int>(argv.size()), argv.data(), out, err);
        return std::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
