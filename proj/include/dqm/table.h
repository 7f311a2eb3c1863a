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

#ifndef DQM_TABLE_H_
#define DQM_TABLE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"

namespace dqm {

enum class ColumnKind { kNumerical, kCategorical };
enum class ColumnRole { kQuasiIdentifier, kSensitiveAttribute, kExcluded };

absl::string_view ColumnKindName(ColumnKind kind);
absl::string_view ColumnRoleName(ColumnRole role);
absl::StatusOr<ColumnKind> ParseColumnKind(absl::string_view text);
absl::StatusOr<ColumnRole> ParseColumnRole(absl::string_view text);

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::kNumerical;
  ColumnRole role = ColumnRole::kQuasiIdentifier;

  friend bool operator==(const ColumnSchema&, const ColumnSchema&) = default;
};

using RowId = int64_t;
using RowIdSet = absl::flat_hash_set<RowId>;

// Missing numerical cells are NaN; missing categorical cells are nullopt.
using NumericValues = std::vector<double>;
using CategoricalValues = std::vector<std::optional<std::string>>;
using ColumnData = std::variant<NumericValues, CategoricalValues>;

inline bool IsMissing(double v) { return v != v; }
double MissingNumber();

// A single cell as seen through the generic accessor.
using Cell = std::variant<std::monostate, double, std::string>;

// Immutable column-major table with explicit row identity.
class Table {
 public:
  Table() = default;

  // Validates that every column has one cell per row, that column kinds match
  // the schema, and that row ids are unique.
  static absl::StatusOr<Table> Create(std::vector<ColumnSchema> schema,
                                      std::vector<RowId> row_ids,
                                      std::vector<ColumnData> columns);

  const std::vector<ColumnSchema>& schema() const { return schema_; }
  size_t num_rows() const { return row_ids_.size(); }
  size_t num_columns() const { return schema_.size(); }
  absl::Span<const RowId> row_ids() const { return row_ids_; }

  absl::StatusOr<size_t> ColumnIndex(absl::string_view name) const;
  bool HasColumn(absl::string_view name) const;

  const ColumnData& column(size_t index) const { return columns_[index]; }

  absl::StatusOr<absl::Span<const double>> Numeric(
      absl::string_view name) const;
  absl::StatusOr<absl::Span<const std::optional<std::string>>> Categorical(
      absl::string_view name) const;

  // Names of columns with the given role, in schema order.
  std::vector<std::string> ColumnsWithRole(ColumnRole role) const;

  // New table holding the rows at `positions` (in that order).
  Table SelectRows(absl::Span<const size_t> positions) const;

  // New table without the named columns.
  Table DropColumns(absl::Span<const std::string> names) const;

  // Position of each row id, or nullopt when absent.
  std::optional<size_t> PositionOf(RowId id) const;

 private:
  std::vector<ColumnSchema> schema_;
  std::vector<RowId> row_ids_;
  std::vector<ColumnData> columns_;
};

struct CsvOptions {
  char delimiter = ',';
  // Name of the row identity column. When the file lacks it, ids are
  // generated as 0..n-1.
  std::string id_column = "row_id";
};

// Reads a delimiter-separated file with a header row. Only columns named in
// `schema` are loaded; unparseable numerical cells become missing.
absl::StatusOr<Table> LoadTable(const std::string& path,
                                const std::vector<ColumnSchema>& schema,
                                const CsvOptions& options = {});
absl::StatusOr<Table> ParseTable(absl::string_view text,
                                 const std::vector<ColumnSchema>& schema,
                                 const CsvOptions& options = {});

// Writes the id column followed by every schema column. Numbers use the
// shortest representation that round-trips exactly; missing cells are empty.
std::string FormatTable(const Table& table, const CsvOptions& options = {});
absl::Status WriteTable(const Table& table, const std::string& path,
                        const CsvOptions& options = {});

// Shortest round-trip text for a double; NaN formats as an empty string.
std::string FormatNumber(double value);

// Splits one delimited record honouring double-quote escaping.
std::vector<std::string> SplitRecord(absl::string_view line, char delimiter);

// An original table, the anonymized non-suppressed rows, and the suppressed
// ids. `aligned_original` holds the original's non-suppressed rows in the same
// order as `anonymized`, so column vectors of both have equal length.
struct DatasetPair {
  Table original;
  Table aligned_original;
  Table anonymized;
  RowIdSet suppressed;
};

// The anonymized schema must equal the original's, or the original's with
// sensitive-attribute columns removed.
absl::StatusOr<DatasetPair> AlignPair(const Table& original,
                                      const Table& anonymized,
                                      const RowIdSet& suppressed);

// Column values in row order with missing markers preserved.
absl::StatusOr<std::vector<Cell>> ColumnVector(const Table& table,
                                               absl::string_view name);

}  // namespace dqm

#endif  // DQM_TABLE_H_
