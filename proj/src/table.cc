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

#include "dqm/table.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace dqm {

absl::string_view ColumnKindName(ColumnKind kind) {
  return kind == ColumnKind::kNumerical ? "numerical" : "categorical";
}

absl::string_view ColumnRoleName(ColumnRole role) {
  switch (role) {
    case ColumnRole::kQuasiIdentifier:
      return "quasi_identifier";
    case ColumnRole::kSensitiveAttribute:
      return "sensitive";
    case ColumnRole::kExcluded:
      return "excluded";
  }
  return "excluded";
}

absl::StatusOr<ColumnKind> ParseColumnKind(absl::string_view text) {
  if (text == "numerical" || text == "numeric") return ColumnKind::kNumerical;
  if (text == "categorical") return ColumnKind::kCategorical;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown column kind '", text, "'"));
}

absl::StatusOr<ColumnRole> ParseColumnRole(absl::string_view text) {
  if (text == "quasi_identifier" || text == "qid") {
    return ColumnRole::kQuasiIdentifier;
  }
  if (text == "sensitive" || text == "sensitive_attribute") {
    return ColumnRole::kSensitiveAttribute;
  }
  if (text == "excluded") return ColumnRole::kExcluded;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown column role '", text, "'"));
}

double MissingNumber() { return std::numeric_limits<double>::quiet_NaN(); }

absl::StatusOr<Table> Table::Create(std::vector<ColumnSchema> schema,
                                    std::vector<RowId> row_ids,
                                    std::vector<ColumnData> columns) {
  if (schema.size() != columns.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("schema has ", schema.size(), " columns but ",
                     columns.size(), " were supplied"));
  }
  absl::flat_hash_set<std::string> names;
  for (size_t c = 0; c < schema.size(); ++c) {
    if (!names.insert(schema[c].name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate column '", schema[c].name, "'"));
    }
    const bool numeric = std::holds_alternative<NumericValues>(columns[c]);
    if (numeric != (schema[c].kind == ColumnKind::kNumerical)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "column '", schema[c].name, "' storage does not match its kind"));
    }
    const size_t n = std::visit([](const auto& v) { return v.size(); },
                                columns[c]);
    if (n != row_ids.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("column '", schema[c].name, "' has ", n,
                       " cells, expected ", row_ids.size()));
    }
  }
  RowIdSet seen;
  for (RowId id : row_ids) {
    if (!seen.insert(id).second) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate row id ", id));
    }
  }
  Table t;
  t.schema_ = std::move(schema);
  t.row_ids_ = std::move(row_ids);
  t.columns_ = std::move(columns);
  return t;
}

absl::StatusOr<size_t> Table::ColumnIndex(absl::string_view name) const {
  for (size_t c = 0; c < schema_.size(); ++c) {
    if (schema_[c].name == name) return c;
  }
  return absl::NotFoundError(absl::StrCat("unknown column '", name, "'"));
}

bool Table::HasColumn(absl::string_view name) const {
  return ColumnIndex(name).ok();
}

absl::StatusOr<absl::Span<const double>> Table::Numeric(
    absl::string_view name) const {
  absl::StatusOr<size_t> c = ColumnIndex(name);
  if (!c.ok()) return c.status();
  const auto* values = std::get_if<NumericValues>(&columns_[*c]);
  if (values == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("column '", name, "' is not numerical"));
  }
  return absl::Span<const double>(*values);
}

absl::StatusOr<absl::Span<const std::optional<std::string>>>
Table::Categorical(absl::string_view name) const {
  absl::StatusOr<size_t> c = ColumnIndex(name);
  if (!c.ok()) return c.status();
  const auto* values = std::get_if<CategoricalValues>(&columns_[*c]);
  if (values == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("column '", name, "' is not categorical"));
  }
  return absl::Span<const std::optional<std::string>>(*values);
}

std::vector<std::string> Table::ColumnsWithRole(ColumnRole role) const {
  std::vector<std::string> out;
  for (const ColumnSchema& s : schema_) {
    if (s.role == role) out.push_back(s.name);
  }
  return out;
}

Table Table::SelectRows(absl::Span<const size_t> positions) const {
  Table t;
  t.schema_ = schema_;
  t.row_ids_.reserve(positions.size());
  for (size_t p : positions) t.row_ids_.push_back(row_ids_[p]);
  t.columns_.reserve(columns_.size());
  for (const ColumnData& col : columns_) {
    t.columns_.push_back(std::visit(
        [&](const auto& values) -> ColumnData {
          std::decay_t<decltype(values)> out;
          out.reserve(positions.size());
          for (size_t p : positions) out.push_back(values[p]);
          return out;
        },
        col));
  }
  return t;
}

Table Table::DropColumns(absl::Span<const std::string> names) const {
  Table t;
  t.row_ids_ = row_ids_;
  for (size_t c = 0; c < schema_.size(); ++c) {
    bool drop = false;
    for (const std::string& n : names) drop = drop || n == schema_[c].name;
    if (drop) continue;
    t.schema_.push_back(schema_[c]);
    t.columns_.push_back(columns_[c]);
  }
  return t;
}

std::optional<size_t> Table::PositionOf(RowId id) const {
  for (size_t i = 0; i < row_ids_.size(); ++i) {
    if (row_ids_[i] == id) return i;
  }
  return std::nullopt;
}

std::vector<std::string> SplitRecord(absl::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == delimiter) {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

namespace {

std::optional<double> ParseNumber(absl::string_view text) {
  text = absl::StripAsciiWhitespace(text);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || std::isnan(value)) {
    return std::nullopt;
  }
  return value;
}

std::vector<absl::string_view> SplitLines(absl::string_view text) {
  std::vector<absl::string_view> lines;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == absl::string_view::npos) end = text.size();
    absl::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string Quote(absl::string_view field, char delimiter) {
  if (field.find_first_of(std::string{delimiter, '"', '\n'}) ==
      absl::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

}  // namespace

absl::StatusOr<Table> ParseTable(absl::string_view text,
                                 const std::vector<ColumnSchema>& schema,
                                 const CsvOptions& options) {
  std::vector<absl::string_view> lines = SplitLines(text);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) {
    return absl::InvalidArgumentError("empty file: header row required");
  }
  const std::vector<std::string> header =
      SplitRecord(lines[0], options.delimiter);
  absl::flat_hash_map<std::string, size_t> field_index;
  for (size_t i = 0; i < header.size(); ++i) {
    field_index.emplace(std::string(absl::StripAsciiWhitespace(header[i])), i);
  }
  std::vector<size_t> source(schema.size());
  for (size_t c = 0; c < schema.size(); ++c) {
    auto it = field_index.find(schema[c].name);
    if (it == field_index.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "schema error: column '", schema[c].name, "' not in header"));
    }
    source[c] = it->second;
  }
  std::optional<size_t> id_field;
  if (auto it = field_index.find(options.id_column); it != field_index.end()) {
    id_field = it->second;
  }

  std::vector<RowId> ids;
  std::vector<ColumnData> columns;
  for (const ColumnSchema& s : schema) {
    if (s.kind == ColumnKind::kNumerical) {
      columns.emplace_back(NumericValues{});
    } else {
      columns.emplace_back(CategoricalValues{});
    }
  }
  for (size_t r = 1; r < lines.size(); ++r) {
    if (lines[r].empty()) continue;
    std::vector<std::string> fields = SplitRecord(lines[r], options.delimiter);
    if (fields.size() != header.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", r + 1, ": expected ", header.size(),
                       " fields, found ", fields.size()));
    }
    if (id_field.has_value()) {
      std::optional<double> id = ParseNumber(fields[*id_field]);
      if (!id.has_value() || *id != std::floor(*id)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", r + 1, ": row id '", fields[*id_field],
            "' is not an integer"));
      }
      ids.push_back(static_cast<RowId>(*id));
    } else {
      ids.push_back(static_cast<RowId>(ids.size()));
    }
    for (size_t c = 0; c < schema.size(); ++c) {
      const std::string& field = fields[source[c]];
      if (auto* nums = std::get_if<NumericValues>(&columns[c])) {
        nums->push_back(ParseNumber(field).value_or(MissingNumber()));
      } else {
        auto& cats = std::get<CategoricalValues>(columns[c]);
        if (field.empty()) {
          cats.push_back(std::nullopt);
        } else {
          cats.push_back(field);
        }
      }
    }
  }
  return Table::Create(schema, std::move(ids), std::move(columns));
}

absl::StatusOr<Table> LoadTable(const std::string& path,
                                const std::vector<ColumnSchema>& schema,
                                const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseTable(buffer.str(), schema, options);
}

std::string FormatNumber(double value) {
  if (IsMissing(value)) return "";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string FormatTable(const Table& table, const CsvOptions& options) {
  const char d = options.delimiter;
  std::string out = Quote(options.id_column, d);
  for (const ColumnSchema& s : table.schema()) {
    out.push_back(d);
    out += Quote(s.name, d);
  }
  out.push_back('\n');
  for (size_t r = 0; r < table.num_rows(); ++r) {
    out += std::to_string(table.row_ids()[r]);
    for (size_t c = 0; c < table.num_columns(); ++c) {
      out.push_back(d);
      const ColumnData& col = table.column(c);
      if (const auto* nums = std::get_if<NumericValues>(&col)) {
        out += FormatNumber((*nums)[r]);
      } else {
        const auto& cell = std::get<CategoricalValues>(col)[r];
        if (cell.has_value()) out += Quote(*cell, d);
      }
    }
    out.push_back('\n');
  }
  return out;
}

absl::Status WriteTable(const Table& table, const std::string& path,
                        const CsvOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << FormatTable(table, options);
  if (!out) return absl::UnavailableError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<DatasetPair> AlignPair(const Table& original,
                                      const Table& anonymized,
                                      const RowIdSet& suppressed) {
  const std::vector<std::string> sensitive =
      original.ColumnsWithRole(ColumnRole::kSensitiveAttribute);
  if (anonymized.schema() != original.schema() &&
      anonymized.schema() != original.DropColumns(sensitive).schema()) {
    return absl::InvalidArgumentError(
        "alignment error: anonymized schema differs from original");
  }
  absl::flat_hash_map<RowId, size_t> original_pos;
  for (size_t i = 0; i < original.num_rows(); ++i) {
    original_pos.emplace(original.row_ids()[i], i);
  }
  for (RowId id : suppressed) {
    if (!original_pos.contains(id)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "alignment error: suppressed id ", id, " not in original"));
    }
  }
  // Anonymized rows follow the original's row order.
  std::vector<std::pair<size_t, size_t>> matches;  // (original, anonymized)
  for (size_t j = 0; j < anonymized.num_rows(); ++j) {
    const RowId id = anonymized.row_ids()[j];
    auto it = original_pos.find(id);
    if (it == original_pos.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "alignment error: anonymized id ", id, " not in original"));
    }
    if (suppressed.contains(id)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "alignment error: id ", id, " is both suppressed and present"));
    }
    matches.emplace_back(it->second, j);
  }
  if (matches.size() + suppressed.size() != original.num_rows()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "alignment error: ", original.num_rows(), " original rows but ",
        matches.size(), " anonymized and ", suppressed.size(), " suppressed"));
  }
  std::sort(matches.begin(), matches.end());
  std::vector<size_t> orig_positions, anon_positions;
  for (const auto& [o, a] : matches) {
    orig_positions.push_back(o);
    anon_positions.push_back(a);
  }
  DatasetPair pair;
  pair.original = original;
  pair.aligned_original = original.SelectRows(orig_positions);
  pair.anonymized = anonymized.SelectRows(anon_positions);
  pair.suppressed = suppressed;
  return pair;
}

absl::StatusOr<std::vector<Cell>> ColumnVector(const Table& table,
                                               absl::string_view name) {
  absl::StatusOr<size_t> c = table.ColumnIndex(name);
  if (!c.ok()) return c.status();
  std::vector<Cell> out;
  out.reserve(table.num_rows());
  const ColumnData& col = table.column(*c);
  if (const auto* nums = std::get_if<NumericValues>(&col)) {
    for (double v : *nums) {
      if (IsMissing(v)) {
        out.emplace_back(std::monostate{});
      } else {
        out.emplace_back(v);
      }
    }
  } else {
    for (const auto& cell : std::get<CategoricalValues>(col)) {
      if (cell.has_value()) {
        out.emplace_back(*cell);
      } else {
        out.emplace_back(std::monostate{});
      }
    }
  }
  return out;
}

}  // namespace dqm
