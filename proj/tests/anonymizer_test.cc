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

#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dqm {
namespace {

using ::dqm::testing::ExampleTable;
using ::dqm::testing::ExampleTree;
using ::testing::ElementsAre;
using ::testing::UnorderedElementsAre;

const std::vector<std::string> kExampleQids = {"n_accept", "n_reject"};

AnonymizerOptions WithK(int k) {
  AnonymizerOptions o;
  o.k = k;
  return o;
}

Table CategoricalTable(const std::vector<std::string>& values) {
  std::vector<ColumnSchema> schema = {
      {"c", ColumnKind::kCategorical, ColumnRole::kQuasiIdentifier}};
  CategoricalValues cells(values.begin(), values.end());
  std::vector<RowId> ids;
  for (size_t i = 0; i < values.size(); ++i) ids.push_back(i);
  std::vector<ColumnData> cols;
  cols.emplace_back(std::move(cells));
  return *Table::Create(schema, ids, std::move(cols));
}

TEST(AnonymizerTest, ExampleSuppressesOutlierAndAverages) {
  Table t = ExampleTable();
  ASSERT_OK_AND_ASSIGN(AnonymizationResult r,
                       Anonymize(t, kExampleQids, {}, WithK(2)));
  EXPECT_THAT(r.suppressed_row_ids, ElementsAre(5));
  ASSERT_EQ(r.classes.size(), 2u);
  EXPECT_THAT(r.classes[0].row_ids, UnorderedElementsAre(3, 4));
  EXPECT_THAT(r.classes[1].row_ids, UnorderedElementsAre(1, 2));
  EXPECT_EQ(r.classes[1].values[1].mean, 1.5);
  EXPECT_EQ(r.num_anonymized(), 4u);
  EXPECT_OK(CheckResult(t, r));

  ASSERT_OK_AND_ASSIGN(DatasetPair p, ToPair(t, r));
  ASSERT_OK_AND_ASSIGN(auto rej, p.anonymized.Numeric("n_reject"));
  EXPECT_THAT(p.anonymized.row_ids(), ElementsAre(1, 2, 3, 4));
  EXPECT_THAT(rej, ElementsAre(1.5, 1.5, 1, 1));
  EXPECT_TRUE(p.suppressed.contains(5));
}

TEST(AnonymizerTest, RejectsBadOptions) {
  Table t = ExampleTable();
  EXPECT_EQ(Anonymize(t, kExampleQids, {}, WithK(1)).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(Anonymize(t, std::vector<std::string>{}, {}, WithK(2)).ok());
  AnonymizerOptions bad = WithK(2);
  bad.max_suppression_frac = 1.5;
  EXPECT_FALSE(Anonymize(t, kExampleQids, {}, bad).ok());
  EXPECT_FALSE(
      Anonymize(t, std::vector<std::string>{"nope"}, {}, WithK(2)).ok());
}

TEST(AnonymizerTest, SuppressionBudgetIsFailedPrecondition) {
  Table t = ExampleTable();
  AnonymizerOptions o = WithK(2);
  o.max_suppression_frac = 0.1;
  EXPECT_EQ(Anonymize(t, kExampleQids, {}, o).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(AnonymizerTest, CategoricalGeneralizesToLca) {
  Table t = CategoricalTable({"foo", "bar", "test", "test"});
  GTreeMap trees;
  trees.emplace("c", ExampleTree());
  std::vector<std::string> qids = {"c"};
  ASSERT_OK_AND_ASSIGN(AnonymizationResult r,
                       Anonymize(t, qids, trees, WithK(2)));
  ASSERT_EQ(r.classes.size(), 2u);
  EXPECT_TRUE(r.suppressed_row_ids.empty());
  std::vector<std::string> labels;
  for (const auto& e : r.classes) labels.push_back(e.values[0].label);
  EXPECT_THAT(labels, UnorderedElementsAre("foobar", "test"));
}

TEST(AnonymizerTest, GeneralizationLimitSuppressesInsteadOfWidening) {
  Table t = CategoricalTable({"foo", "foo", "test"});
  GTreeMap trees;
  trees.emplace("c", ExampleTree());
  std::vector<std::string> qids = {"c"};
  AnonymizerOptions o = WithK(2);
  o.generalization_limit = 0.5;
  ASSERT_OK_AND_ASSIGN(AnonymizationResult r, Anonymize(t, qids, trees, o));
  EXPECT_THAT(r.suppressed_row_ids, ElementsAre(2));
  ASSERT_EQ(r.classes.size(), 1u);
  EXPECT_EQ(r.classes[0].values[0].label, "foo");
}

TEST(AnonymizerTest, TokenOutsideTreeIsError) {
  Table t = CategoricalTable({"foo", "zzz"});
  GTreeMap trees;
  trees.emplace("c", ExampleTree());
  std::vector<std::string> qids = {"c"};
  EXPECT_FALSE(Anonymize(t, qids, trees, WithK(2)).ok());
}

TEST(AnonymizerTest, FlatTreeResolvedWhenAbsent) {
  Table t = CategoricalTable({"a", "b", "a"});
  std::vector<std::string> qids = {"c"};
  ASSERT_OK_AND_ASSIGN(GTreeMap trees, ResolveGTrees(t, qids, {}));
  ASSERT_EQ(trees.count("c"), 1u);
  EXPECT_THAT(trees.at("c").LeafLabels(), UnorderedElementsAre("a", "b"));
}

TEST(AnonymizerTest, SensitiveColumnDroppedFromPair) {
  std::vector<ColumnSchema> schema = {
      {"x", ColumnKind::kNumerical, ColumnRole::kQuasiIdentifier},
      {"s", ColumnKind::kCategorical, ColumnRole::kSensitiveAttribute}};
  ASSERT_OK_AND_ASSIGN(Table t,
                       ParseTable("x,s\n1,a\n2,b\n3,a\n4,b\n", schema));
  std::vector<std::string> qids = {"x"};
  ASSERT_OK_AND_ASSIGN(AnonymizationResult r, Anonymize(t, qids, {}, WithK(2)));
  ASSERT_OK_AND_ASSIGN(DatasetPair p, ToPair(t, r));
  EXPECT_FALSE(p.anonymized.HasColumn("s"));
  EXPECT_TRUE(p.aligned_original.HasColumn("s"));
}

TEST(AnonymizerTest, CheckResultDetectsViolations) {
  Table t = ExampleTable();
  ASSERT_OK_AND_ASSIGN(AnonymizationResult r,
                       Anonymize(t, kExampleQids, {}, WithK(2)));
  AnonymizationResult small = r;
  small.classes[0].row_ids.pop_back();
  EXPECT_FALSE(CheckResult(t, small).ok());
  AnonymizationResult twice = r;
  twice.suppressed_row_ids.push_back(twice.classes[0].row_ids[0]);
  EXPECT_FALSE(CheckResult(t, twice).ok());
}

TEST(AnonymizerTest, ReconstructMatchesDirectResult) {
  Table t = ExampleTable();
  ASSERT_OK_AND_ASSIGN(AnonymizationResult r,
                       Anonymize(t, kExampleQids, {}, WithK(2)));
  ASSERT_OK_AND_ASSIGN(DatasetPair p, ToPair(t, r));
  ASSERT_OK_AND_ASSIGN(
      AnonymizationResult back,
      ReconstructResult(t, p.anonymized, kExampleQids, {}, 2));
  EXPECT_EQ(back.suppressed_row_ids, r.suppressed_row_ids);
  ASSERT_EQ(back.classes.size(), r.classes.size());
  std::vector<std::vector<RowId>> a, b;
  for (const auto& e : r.classes) a.push_back(e.row_ids);
  for (const auto& e : back.classes) b.push_back(e.row_ids);
  EXPECT_THAT(b, UnorderedElementsAre(a[0], a[1]));
}

TEST(AnonymizerTest, DeterministicAcrossCalls) {
  std::vector<double> x, y;
  for (int i = 0; i < 200; ++i) {
    x.push_back((i * 37) % 101);
    y.push_back((i * 53) % 17);
  }
  Table t = testing::NumericTable({{"x", x}, {"y", y}});
  std::vector<std::string> qids = {"x", "y"};
  ASSERT_OK_AND_ASSIGN(AnonymizationResult r1, Anonymize(t, qids, {}, WithK(5)));
  ASSERT_OK_AND_ASSIGN(AnonymizationResult r2, Anonymize(t, qids, {}, WithK(5)));
  ASSERT_EQ(r1.classes.size(), r2.classes.size());
  for (size_t i = 0; i < r1.classes.size(); ++i) {
    EXPECT_EQ(r1.classes[i].row_ids, r2.classes[i].row_ids);
  }
  EXPECT_EQ(r1.suppressed_row_ids, r2.suppressed_row_ids);
}

}  // namespace
}  // namespace dqm
