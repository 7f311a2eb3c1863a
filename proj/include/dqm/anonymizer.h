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

#ifndef DQM_ANONYMIZER_H_
#define DQM_ANONYMIZER_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "dqm/gtree.h"
#include "dqm/table.h"

namespace dqm {

struct AnonymizerOptions {
  int k = 2;
  // Fraction of rows that may be suppressed before anonymization fails.
  double max_suppression_frac = 1.0;
  // Largest normalized spread a class may have on any quasi-identifier:
  // range / column range for numericals, lca size / root size for
  // categoricals. Values >= 1 disable the limit.
  double generalization_limit = 1.0;
  // Residual rows whose distance to the nearest class centroid exceeds this
  // quantile of member-to-centroid distances are suppressed.
  double outlier_quantile = 0.99;
};

// Anonymized value of one quasi-identifier for a class.
struct GeneralizedValue {
  double mean = 0.0;         // numerical: class mean
  GTree::NodeId node = -1;   // categorical: lca node
  std::string label;         // categorical: lca label
};

struct EquivalenceClass {
  std::vector<RowId> row_ids;
  // One entry per quasi-identifier, in AnonymizationResult::quasi_ids order.
  std::vector<GeneralizedValue> values;
};

struct AnonymizationResult {
  int k = 2;
  std::vector<std::string> quasi_ids;
  std::vector<EquivalenceClass> classes;
  std::vector<RowId> suppressed_row_ids;  // ascending
  // Trees used for every categorical quasi-identifier.
  GTreeMap gtrees;
  size_t num_original_rows = 0;

  size_t num_anonymized() const;
  RowIdSet SuppressedSet() const;
};

// Explicit trees for the categorical columns among `columns`, with flat trees
// (root size 1.0) generated for the rest. Every observed token must be a leaf.
absl::StatusOr<GTreeMap> ResolveGTrees(const Table& table,
                                       absl::Span<const std::string> columns,
                                       const GTreeMap& explicit_trees);

// Greedy micro-aggregation: seeds are visited from the densest region
// outwards, each seed forms a class with its k-1 nearest unassigned rows, and
// the residual rows either join their nearest class or are suppressed.
// Numerical quasi-identifiers are replaced by class means, categorical ones
// by the lca of the class's tokens.
absl::StatusOr<AnonymizationResult> Anonymize(
    const Table& table, absl::Span<const std::string> quasi_ids,
    const GTreeMap& gtrees, const AnonymizerOptions& options);

// Checks that classes and suppressed rows partition the table and that every
// class has at least k rows.
absl::Status CheckResult(const Table& table, const AnonymizationResult& result);

// Materializes the anonymized table (sensitive columns dropped) and aligns
// it with the original.
absl::StatusOr<DatasetPair> ToPair(const Table& table,
                                   const AnonymizationResult& result);

// Recovers classes from an anonymized table by grouping rows on their
// quasi-identifier values. Rows of `original` absent from `anonymized` are
// treated as suppressed.
absl::StatusOr<AnonymizationResult> ReconstructResult(
    const Table& original, const Table& anonymized,
    absl::Span<const std::string> quasi_ids, const GTreeMap& gtrees, int k);

}  // namespace dqm

#endif  // DQM_ANONYMIZER_H_
