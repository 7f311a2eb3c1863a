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

#include "dqm/anonymizer.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <map>
#include <tuple>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/str_cat.h"

namespace dqm {

size_t AnonymizationResult::num_anonymized() const {
  size_t n = 0;
  for (const EquivalenceClass& e : classes) n += e.row_ids.size();
  return n;
}

RowIdSet AnonymizationResult::SuppressedSet() const {
  return RowIdSet(suppressed_row_ids.begin(), suppressed_row_ids.end());
}

absl::StatusOr<GTreeMap> ResolveGTrees(const Table& table,
                                       absl::Span<const std::string> columns,
                                       const GTreeMap& explicit_trees) {
  GTreeMap out;
  for (const std::string& name : columns) {
    absl::StatusOr<size_t> c = table.ColumnIndex(name);
    if (!c.ok()) return c.status();
    if (table.schema()[*c].kind != ColumnKind::kCategorical) continue;
    auto cells = *table.Categorical(name);
    std::vector<std::string> tokens;
    for (const auto& cell : cells) {
      if (cell.has_value()) tokens.push_back(*cell);
    }
    if (auto it = explicit_trees.find(name); it != explicit_trees.end()) {
      for (const std::string& t : tokens) {
        if (!it->second.HasLeaf(t)) {
          return absl::InvalidArgumentError(absl::StrCat(
              "column '", name, "': value '", t, "' is not a g-tree leaf"));
        }
      }
      out.emplace(name, it->second);
      continue;
    }
    absl::StatusOr<GTree> tree =
        tokens.empty() ? GTree::Build({"*", 1.0, {}}) : GTree::Flat(tokens);
    if (!tree.ok()) return tree.status();
    out.emplace(name, *std::move(tree));
  }
  return out;
}

namespace {

constexpr double kSpreadTolerance = 1e-12;

struct QidColumn {
  bool numeric = true;
  absl::Span<const double> raw;
  std::vector<double> z;  // standardized; NaN when missing
  double range = 0.0;     // max - min over non-missing values
  const GTree* tree = nullptr;
  std::vector<GTree::NodeId> nodes;  // leaf per row; root when missing
};

// Running spread of a class on every quasi-identifier.
struct Spread {
  std::vector<double> lo, hi;
  std::vector<GTree::NodeId> node;
};

class Workspace {
 public:
  Workspace(const Table& table, std::vector<QidColumn> cols)
      : table_(table), cols_(std::move(cols)) {}

  size_t num_rows() const { return table_.num_rows(); }
  RowId id(size_t row) const { return table_.row_ids()[row]; }
  const std::vector<QidColumn>& cols() const { return cols_; }

  double Distance2(size_t a, size_t b) const {
    double d2 = 0.0;
    for (const QidColumn& c : cols_) {
      if (c.numeric) {
        const double za = c.z[a], zb = c.z[b];
        if (IsMissing(za) || IsMissing(zb)) continue;
        d2 += (za - zb) * (za - zb);
      } else {
        const double s = CategoricalDistance(c, c.tree->Lca(c.nodes[a],
                                                            c.nodes[b]));
        d2 += s * s;
      }
    }
    return d2;
  }

  static double CategoricalDistance(const QidColumn& c, GTree::NodeId lca) {
    const double root = c.tree->root_size();
    return root > 0.0 ? c.tree->node(lca).size / root : 0.0;
  }

  Spread EmptySpread() const {
    Spread s;
    for (const QidColumn& c : cols_) {
      s.lo.push_back(std::numeric_limits<double>::infinity());
      s.hi.push_back(-std::numeric_limits<double>::infinity());
      s.node.push_back(-1);
      (void)c;
    }
    return s;
  }

  void Extend(Spread& s, size_t row) const {
    for (size_t j = 0; j < cols_.size(); ++j) {
      const QidColumn& c = cols_[j];
      if (c.numeric) {
        const double v = c.raw[row];
        if (IsMissing(v)) continue;
        s.lo[j] = std::min(s.lo[j], v);
        s.hi[j] = std::max(s.hi[j], v);
      } else {
        s.node[j] = s.node[j] < 0 ? c.nodes[row]
                                  : c.tree->Lca(s.node[j], c.nodes[row]);
      }
    }
  }

  bool WithinLimit(const Spread& s, double limit) const {
    if (limit >= 1.0) return true;
    for (size_t j = 0; j < cols_.size(); ++j) {
      const QidColumn& c = cols_[j];
      double spread = 0.0;
      if (c.numeric) {
        if (s.hi[j] >= s.lo[j] && c.range > 0.0) {
          spread = (s.hi[j] - s.lo[j]) / c.range;
        }
      } else if (s.node[j] >= 0) {
        spread = CategoricalDistance(c, s.node[j]);
      }
      if (spread > limit + kSpreadTolerance) return false;
    }
    return true;
  }

 private:
  const Table& table_;
  std::vector<QidColumn> cols_;
};

// Rows sharing one exact quasi-identifier tuple, ordered by row id.
struct Atom {
  std::vector<size_t> rows;
  size_t next = 0;  // rows[0..next) are consumed
  size_t available() const { return rows.size() - next; }
  size_t rep() const { return rows.front(); }
};

struct Centroid {
  std::vector<double> z;
  std::vector<GTree::NodeId> node;
};

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * (values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - lo) * (values[hi] - values[lo]);
}

absl::StatusOr<std::vector<QidColumn>> BuildColumns(
    const Table& table, absl::Span<const std::string> quasi_ids,
    const GTreeMap& trees) {
  std::vector<QidColumn> cols;
  for (const std::string& name : quasi_ids) {
    absl::StatusOr<size_t> c = table.ColumnIndex(name);
    if (!c.ok()) return c.status();
    QidColumn col;
    if (table.schema()[*c].kind == ColumnKind::kNumerical) {
      col.numeric = true;
      col.raw = *table.Numeric(name);
      double sum = 0.0, lo = std::numeric_limits<double>::infinity(),
             hi = -lo;
      size_t count = 0;
      for (double v : col.raw) {
        if (IsMissing(v)) continue;
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        ++count;
      }
      const double mean = count > 0 ? sum / count : 0.0;
      double ss = 0.0;
      for (double v : col.raw) {
        if (!IsMissing(v)) ss += (v - mean) * (v - mean);
      }
      const double sd = count > 0 ? std::sqrt(ss / count) : 0.0;
      col.range = count > 0 ? hi - lo : 0.0;
      col.z.reserve(col.raw.size());
      for (double v : col.raw) {
        if (IsMissing(v)) {
          col.z.push_back(MissingNumber());
        } else {
          col.z.push_back(sd > 0.0 ? (v - mean) / sd : 0.0);
        }
      }
    } else {
      col.numeric = false;
      auto it = trees.find(name);
      if (it == trees.end()) {
        return absl::InvalidArgumentError(
            absl::StrCat("no g-tree for column '", name, "'"));
      }
      col.tree = &it->second;
      for (const auto& cell : *table.Categorical(name)) {
        if (!cell.has_value()) {
          col.nodes.push_back(col.tree->root());
          continue;
        }
        absl::StatusOr<GTree::NodeId> leaf = col.tree->Leaf(*cell);
        if (!leaf.ok()) return leaf.status();
        col.nodes.push_back(*leaf);
      }
    }
    cols.push_back(std::move(col));
  }
  return cols;
}

std::vector<Atom> BuildAtoms(const Workspace& ws) {
  std::vector<size_t> by_id(ws.num_rows());
  std::iota(by_id.begin(), by_id.end(), size_t{0});
  std::sort(by_id.begin(), by_id.end(),
            [&](size_t a, size_t b) { return ws.id(a) < ws.id(b); });
  absl::flat_hash_map<std::vector<uint64_t>, size_t> index;
  std::vector<Atom> atoms;
  std::vector<uint64_t> key;
  for (size_t row : by_id) {
    key.clear();
    for (const QidColumn& c : ws.cols()) {
      if (c.numeric) {
        const double v = c.raw[row];
        key.push_back(IsMissing(v) ? ~uint64_t{0}
                                   : std::bit_cast<uint64_t>(v + 0.0));
      } else {
        key.push_back(static_cast<uint64_t>(c.nodes[row]));
      }
    }
    auto [it, inserted] = index.emplace(key, atoms.size());
    if (inserted) atoms.emplace_back();
    atoms[it->second].rows.push_back(row);
  }
  return atoms;
}

// Distance from each atom to its k-th nearest row, counting multiplicity and
// the atom itself.
std::vector<double> DensityRadii(const Workspace& ws,
                                 const std::vector<Atom>& atoms, size_t k) {
  const size_t n_atoms = atoms.size();
  std::vector<double> radius(n_atoms, 0.0);
  std::vector<std::pair<double, size_t>> dist(n_atoms);
  for (size_t a = 0; a < n_atoms; ++a) {
    if (atoms[a].rows.size() >= k) continue;
    for (size_t b = 0; b < n_atoms; ++b) {
      dist[b] = {ws.Distance2(atoms[a].rep(), atoms[b].rep()), b};
    }
    const size_t prefix = std::min(k, n_atoms);
    std::nth_element(dist.begin(), dist.begin() + (prefix - 1), dist.end());
    std::sort(dist.begin(), dist.begin() + prefix);
    size_t count = 0;
    radius[a] = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < prefix; ++i) {
      count += atoms[dist[i].second].rows.size();
      if (count >= k) {
        radius[a] = dist[i].first;
        break;
      }
    }
  }
  return radius;
}

}  // namespace

absl::StatusOr<AnonymizationResult> Anonymize(
    const Table& table, absl::Span<const std::string> quasi_ids,
    const GTreeMap& gtrees, const AnonymizerOptions& options) {
  if (options.k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("k must be >= 2, got ", options.k));
  }
  if (!(options.max_suppression_frac >= 0.0 &&
        options.max_suppression_frac <= 1.0)) {
    return absl::InvalidArgumentError("max_suppression_frac must be in [0,1]");
  }
  if (quasi_ids.empty()) {
    return absl::InvalidArgumentError("at least one quasi-identifier needed");
  }
  AnonymizationResult result;
  result.k = options.k;
  result.quasi_ids.assign(quasi_ids.begin(), quasi_ids.end());
  result.num_original_rows = table.num_rows();
  absl::StatusOr<GTreeMap> trees = ResolveGTrees(table, quasi_ids, gtrees);
  if (!trees.ok()) return trees.status();
  result.gtrees = *std::move(trees);

  absl::StatusOr<std::vector<QidColumn>> cols =
      BuildColumns(table, quasi_ids, result.gtrees);
  if (!cols.ok()) return cols.status();
  const Workspace ws(table, *std::move(cols));
  const size_t k = static_cast<size_t>(options.k);
  const size_t n = table.num_rows();

  std::vector<Atom> atoms = BuildAtoms(ws);
  const std::vector<double> radius = DensityRadii(ws, atoms, k);
  std::vector<size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (radius[a] != radius[b]) return radius[a] < radius[b];
    return ws.id(atoms[a].rep()) < ws.id(atoms[b].rep());
  });

  std::vector<std::vector<size_t>> classes;
  std::vector<size_t> leftover;
  std::vector<size_t> active(atoms.size());
  std::iota(active.begin(), active.end(), size_t{0});
  size_t remaining = n;
  // (distance^2, lowest available row id, atom)
  std::vector<std::tuple<double, RowId, size_t>> candidates;

  for (size_t a : order) {
    while (atoms[a].available() > 0 && remaining >= k) {
      const size_t seed = atoms[a].rows[atoms[a].next];
      // (atom, rows taken from it)
      std::vector<std::pair<size_t, size_t>> takes;
      if (atoms[a].available() >= k) {
        takes.emplace_back(a, k);
      } else {
        std::erase_if(active,
                      [&](size_t b) { return atoms[b].available() == 0; });
        candidates.clear();
        for (size_t b : active) {
          const Atom& atom = atoms[b];
          const double d2 =
              b == a ? -1.0 : ws.Distance2(seed, atom.rep());
          candidates.emplace_back(d2, ws.id(atom.rows[atom.next]), b);
        }
        const size_t prefix = std::min(k, candidates.size());
        std::nth_element(candidates.begin(),
                         candidates.begin() + (prefix - 1), candidates.end());
        std::sort(candidates.begin(), candidates.begin() + prefix);
        size_t need = k;
        for (size_t i = 0; i < prefix && need > 0; ++i) {
          const size_t b = std::get<2>(candidates[i]);
          const size_t take = std::min(need, atoms[b].available());
          takes.emplace_back(b, take);
          need -= take;
        }
      }
      std::vector<size_t> members;
      for (const auto& [b, take] : takes) {
        for (size_t i = 0; i < take; ++i) {
          members.push_back(atoms[b].rows[atoms[b].next + i]);
        }
      }
      if (options.generalization_limit < 1.0) {
        Spread spread = ws.EmptySpread();
        for (size_t row : members) ws.Extend(spread, row);
        if (!ws.WithinLimit(spread, options.generalization_limit)) {
          leftover.push_back(seed);
          ++atoms[a].next;
          --remaining;
          continue;
        }
      }
      for (const auto& [b, take] : takes) atoms[b].next += take;
      remaining -= k;
      classes.push_back(std::move(members));
    }
    if (remaining < k) break;
  }
  for (const Atom& atom : atoms) {
    for (size_t i = atom.next; i < atom.rows.size(); ++i) {
      leftover.push_back(atom.rows[i]);
    }
  }
  std::sort(leftover.begin(), leftover.end(),
            [&](size_t x, size_t y) { return ws.id(x) < ws.id(y); });

  // Centroids in the standardized space, fixed before residuals are placed.
  const auto& qcols = ws.cols();
  std::vector<Centroid> centroids;
  std::vector<Spread> spreads;
  for (const std::vector<size_t>& members : classes) {
    Centroid c;
    for (const QidColumn& col : qcols) {
      if (col.numeric) {
        double sum = 0.0;
        size_t count = 0;
        for (size_t row : members) {
          if (!IsMissing(col.z[row])) {
            sum += col.z[row];
            ++count;
          }
        }
        c.z.push_back(count > 0 ? sum / count : MissingNumber());
        c.node.push_back(-1);
      } else {
        GTree::NodeId node = col.nodes[members[0]];
        for (size_t row : members) node = col.tree->Lca(node, col.nodes[row]);
        c.z.push_back(MissingNumber());
        c.node.push_back(node);
      }
    }
    centroids.push_back(std::move(c));
    Spread s = ws.EmptySpread();
    for (size_t row : members) ws.Extend(s, row);
    spreads.push_back(std::move(s));
  }
  auto to_centroid = [&](size_t row, const Centroid& c) {
    double d2 = 0.0;
    for (size_t j = 0; j < qcols.size(); ++j) {
      const QidColumn& col = qcols[j];
      if (col.numeric) {
        if (IsMissing(col.z[row]) || IsMissing(c.z[j])) continue;
        d2 += (col.z[row] - c.z[j]) * (col.z[row] - c.z[j]);
      } else {
        const double s = Workspace::CategoricalDistance(
            col, col.tree->Lca(c.node[j], col.nodes[row]));
        d2 += s * s;
      }
    }
    return std::sqrt(d2);
  };
  std::vector<double> within;
  for (size_t i = 0; i < classes.size(); ++i) {
    for (size_t row : classes[i]) within.push_back(to_centroid(row, centroids[i]));
  }
  const double cutoff = Quantile(within, options.outlier_quantile);

  std::vector<size_t> suppressed;
  for (size_t row : leftover) {
    size_t best = classes.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < classes.size(); ++i) {
      const double d = to_centroid(row, centroids[i]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best == classes.size() || best_d > cutoff) {
      suppressed.push_back(row);
      continue;
    }
    Spread trial = spreads[best];
    ws.Extend(trial, row);
    if (!ws.WithinLimit(trial, options.generalization_limit)) {
      suppressed.push_back(row);
      continue;
    }
    spreads[best] = std::move(trial);
    classes[best].push_back(row);
  }

  if (n > 0 && static_cast<double>(suppressed.size()) / n >
                   options.max_suppression_frac + 1e-12) {
    return absl::FailedPreconditionError(absl::StrCat(
        "suppression budget exceeded: ", suppressed.size(), " of ", n,
        " rows suppressed, budget ", options.max_suppression_frac));
  }

  for (std::vector<size_t>& members : classes) {
    std::sort(members.begin(), members.end(),
              [&](size_t x, size_t y) { return ws.id(x) < ws.id(y); });
    EquivalenceClass e;
    for (size_t row : members) e.row_ids.push_back(ws.id(row));
    for (const QidColumn& col : qcols) {
      GeneralizedValue g;
      if (col.numeric) {
        double sum = 0.0, lo = std::numeric_limits<double>::infinity(),
               hi = -lo;
        size_t count = 0;
        for (size_t row : members) {
          const double v = col.raw[row];
          if (IsMissing(v)) continue;
          sum += v;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
          ++count;
        }
        g.mean = count == 0 ? MissingNumber() : (lo == hi ? lo : sum / count);
      } else {
        GTree::NodeId node = col.nodes[members[0]];
        for (size_t row : members) node = col.tree->Lca(node, col.nodes[row]);
        g.node = node;
        g.label = col.tree->node(node).label;
      }
      e.values.push_back(std::move(g));
    }
    result.classes.push_back(std::move(e));
  }
  for (size_t row : suppressed) result.suppressed_row_ids.push_back(ws.id(row));
  std::sort(result.suppressed_row_ids.begin(), result.suppressed_row_ids.end());
  return result;
}

absl::Status CheckResult(const Table& table, const AnonymizationResult& result) {
  RowIdSet seen;
  for (const EquivalenceClass& e : result.classes) {
    if (e.row_ids.size() < static_cast<size_t>(result.k)) {
      return absl::InvalidArgumentError(
          absl::StrCat("equivalence class of size ", e.row_ids.size(),
                       " is smaller than k = ", result.k));
    }
    if (e.values.size() != result.quasi_ids.size()) {
      return absl::InvalidArgumentError(
          "equivalence class lacks a value per quasi-identifier");
    }
    for (RowId id : e.row_ids) {
      if (!seen.insert(id).second) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", id, " appears in two classes"));
      }
    }
  }
  for (RowId id : result.suppressed_row_ids) {
    if (!seen.insert(id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", id, " is both suppressed and classified"));
    }
  }
  if (seen.size() != table.num_rows()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "result covers ", seen.size(), " rows, table has ", table.num_rows()));
  }
  for (RowId id : table.row_ids()) {
    if (!seen.contains(id)) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", id, " is not covered by the result"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<DatasetPair> ToPair(const Table& table,
                                   const AnonymizationResult& result) {
  if (absl::Status s = CheckResult(table, result); !s.ok()) return s;
  absl::flat_hash_map<RowId, size_t> pos;
  for (size_t i = 0; i < table.num_rows(); ++i) pos.emplace(table.row_ids()[i], i);
  // Row position -> class index.
  std::vector<int> class_of(table.num_rows(), -1);
  for (size_t c = 0; c < result.classes.size(); ++c) {
    for (RowId id : result.classes[c].row_ids) class_of[pos.at(id)] = static_cast<int>(c);
  }
  std::vector<size_t> kept;
  for (size_t i = 0; i < table.num_rows(); ++i) {
    if (class_of[i] >= 0) kept.push_back(i);
  }
  absl::flat_hash_map<std::string, size_t> qid_slot;
  for (size_t j = 0; j < result.quasi_ids.size(); ++j) {
    qid_slot.emplace(result.quasi_ids[j], j);
  }
  std::vector<RowId> ids;
  for (size_t i : kept) ids.push_back(table.row_ids()[i]);
  std::vector<ColumnSchema> schema;
  std::vector<ColumnData> columns;
  for (size_t c = 0; c < table.num_columns(); ++c) {
    const ColumnSchema& s = table.schema()[c];
    if (s.role == ColumnRole::kSensitiveAttribute) continue;
    schema.push_back(s);
    auto slot = qid_slot.find(s.name);
    if (const auto* nums = std::get_if<NumericValues>(&table.column(c))) {
      NumericValues out;
      for (size_t i : kept) {
        out.push_back(slot == qid_slot.end()
                          ? (*nums)[i]
                          : result.classes[class_of[i]].values[slot->second].mean);
      }
      columns.emplace_back(std::move(out));
    } else {
      const auto& cats = std::get<CategoricalValues>(table.column(c));
      CategoricalValues out;
      for (size_t i : kept) {
        if (slot == qid_slot.end()) {
          out.push_back(cats[i]);
        } else {
          out.push_back(result.classes[class_of[i]].values[slot->second].label);
        }
      }
      columns.emplace_back(std::move(out));
    }
  }
  absl::StatusOr<Table> anonymized =
      Table::Create(std::move(schema), std::move(ids), std::move(columns));
  if (!anonymized.ok()) return anonymized.status();
  return AlignPair(table, *anonymized, result.SuppressedSet());
}

absl::StatusOr<AnonymizationResult> ReconstructResult(
    const Table& original, const Table& anonymized,
    absl::Span<const std::string> quasi_ids, const GTreeMap& gtrees, int k) {
  AnonymizationResult result;
  result.k = k;
  result.quasi_ids.assign(quasi_ids.begin(), quasi_ids.end());
  result.num_original_rows = original.num_rows();
  absl::StatusOr<GTreeMap> trees = ResolveGTrees(original, quasi_ids, gtrees);
  if (!trees.ok()) return trees.status();
  result.gtrees = *std::move(trees);

  RowIdSet present(anonymized.row_ids().begin(), anonymized.row_ids().end());
  for (RowId id : original.row_ids()) {
    if (!present.contains(id)) result.suppressed_row_ids.push_back(id);
  }
  std::sort(result.suppressed_row_ids.begin(), result.suppressed_row_ids.end());

  // Group anonymized rows by their quasi-identifier tuple.
  std::map<std::vector<std::string>, std::vector<size_t>> groups;
  for (size_t r = 0; r < anonymized.num_rows(); ++r) {
    std::vector<std::string> key;
    for (const std::string& q : quasi_ids) {
      absl::StatusOr<size_t> c = anonymized.ColumnIndex(q);
      if (!c.ok()) return c.status();
      if (const auto* nums = std::get_if<NumericValues>(&anonymized.column(*c))) {
        key.push_back(FormatNumber((*nums)[r]));
      } else {
        key.push_back(
            std::get<CategoricalValues>(anonymized.column(*c))[r].value_or(""));
      }
    }
    groups[key].push_back(r);
  }
  absl::flat_hash_map<RowId, size_t> orig_pos;
  for (size_t i = 0; i < original.num_rows(); ++i) {
    orig_pos.emplace(original.row_ids()[i], i);
  }
  for (const auto& [key, rows] : groups) {
    EquivalenceClass e;
    for (size_t r : rows) e.row_ids.push_back(anonymized.row_ids()[r]);
    std::sort(e.row_ids.begin(), e.row_ids.end());
    for (size_t j = 0; j < quasi_ids.size(); ++j) {
      GeneralizedValue g;
      const size_t c = *anonymized.ColumnIndex(quasi_ids[j]);
      if (anonymized.schema()[c].kind == ColumnKind::kNumerical) {
        g.mean = std::get<NumericValues>(anonymized.column(c))[rows[0]];
      } else {
        const GTree& tree = result.gtrees.at(quasi_ids[j]);
        auto cells = *original.Categorical(quasi_ids[j]);
        GTree::NodeId lca = -1;
        for (RowId id : e.row_ids) {
          auto it = orig_pos.find(id);
          if (it == orig_pos.end()) {
            return absl::InvalidArgumentError(
                absl::StrCat("anonymized id ", id, " not in original"));
          }
          const auto& cell = cells[it->second];
          const GTree::NodeId leaf =
              cell.has_value() ? *tree.Leaf(*cell) : tree.root();
          lca = lca < 0 ? leaf : tree.Lca(lca, leaf);
        }
        // The stored label must name the lca or one of its ancestors.
        GTree::NodeId node = lca;
        while (node >= 0 && tree.node(node).label != key[j]) {
          node = tree.node(node).parent;
        }
        if (node < 0) {
          return absl::InvalidArgumentError(absl::StrCat(
              "column '", quasi_ids[j], "': generalized value '", key[j],
              "' does not cover the class's original values"));
        }
        g.node = node;
        g.label = key[j];
      }
      e.values.push_back(std::move(g));
    }
    result.classes.push_back(std::move(e));
  }
  return result;
}

}  // namespace dqm
