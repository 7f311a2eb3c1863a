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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dqm {
namespace {

using ::dqm::testing::BalancedCategoricalTable;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

TEST(SizeGridTest, FivePercentSteps) {
  EXPECT_THAT(SizeGrid(100, 0.25, 2.0), ElementsAre(100, 125, 150, 175, 200));
  std::vector<size_t> g = SizeGrid(1000, 0.05);
  EXPECT_EQ(g.size(), 21u);
  EXPECT_EQ(g.front(), 1000u);
  EXPECT_EQ(g[1], 1050u);
  EXPECT_EQ(g.back(), 2000u);
  // Rounded duplicates collapse.
  EXPECT_THAT(SizeGrid(3, 0.05, 1.5), ElementsAre(3, 4, 5));
  EXPECT_TRUE(SizeGrid(0, 0.05).empty());
}

TEST(SubsampleTest, SortedDistinctDeterministic) {
  std::vector<size_t> a = SubsamplePositions(1000, 300, 2, 9);
  EXPECT_EQ(a.size(), 300u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(std::set<size_t>(a.begin(), a.end()).size(), 300u);
  EXPECT_EQ(a, SubsamplePositions(1000, 300, 2, 9));
  EXPECT_NE(a, SubsamplePositions(1000, 300, 3, 9));
  EXPECT_NE(a, ConfirmationPositions(1000, 300, 9));
  EXPECT_EQ(ConfirmationPositions(1000, 300, 9),
            ConfirmationPositions(1000, 300, 9));
}

SensitivityConfig FixtureConfig(size_t n, int k) {
  SensitivityConfig cfg;
  cfg.n_min = n;
  cfg.anonymizer.k = k;
  cfg.anonymizer.generalization_limit = 0.5;
  cfg.seed = 4;
  return cfg;
}

// A size passes exactly when every category of every sub-sample holds at
// least k rows; otherwise a whole category is suppressed.
std::optional<size_t> BruteForceMinimum(const Table& t,
                                        const SensitivityConfig& cfg) {
  auto cells = *t.Categorical("segment");
  for (size_t size : SizeGrid(cfg.n_min, cfg.step_frac, cfg.max_size_factor)) {
    bool all = true;
    for (size_t j = 0; j < cfg.m_subsamples && all; ++j) {
      std::map<std::string, size_t> counts;
      for (size_t p : SubsamplePositions(t.num_rows(), size, j, cfg.seed)) {
        ++counts[*cells[p]];
      }
      for (const auto& [name, c] : counts) all &= c >= size_t(cfg.anonymizer.k);
      all &= counts.size() == 5;
    }
    if (all) return size;
  }
  return std::nullopt;
}

TEST(SensitivityTest, FindsSizeWhereSuppressionStops) {
  // Every category needs k = 60 rows; s* = 5 * 60 = 300.
  Table t = BalancedCategoricalTable(80);
  std::vector<std::string> qids = {"segment"};
  SensitivityConfig cfg = FixtureConfig(200, 60);
  ASSERT_OK_AND_ASSIGN(SensitivityReport r,
                       SensitivityAnalysis(t, qids, {}, cfg));
  const std::optional<size_t> want = BruteForceMinimum(t, cfg);
  ASSERT_TRUE(want.has_value());
  EXPECT_EQ(r.minimum_passing_size, want);
  EXPECT_GE(*r.minimum_passing_size, 300u);
  EXPECT_FALSE(r.SizePasses(290));
  ASSERT_TRUE(r.confirmation.has_value());
  EXPECT_EQ(r.confirmation_row_ids.size(), *r.minimum_passing_size);
  EXPECT_THAT(r.failure_summary[200], HasSubstr("pctns"));
  for (size_t s : r.sizes) EXPECT_EQ(r.per_size[s].size(), 5u);
}

TEST(SensitivityTest, ReportsAbsenceWhenNothingPasses) {
  Table t = BalancedCategoricalTable(80);
  std::vector<std::string> qids = {"segment"};
  SensitivityConfig cfg = FixtureConfig(100, 60);
  ASSERT_OK_AND_ASSIGN(SensitivityReport r,
                       SensitivityAnalysis(t, qids, {}, cfg));
  EXPECT_FALSE(r.minimum_passing_size.has_value());
  EXPECT_FALSE(r.confirmation.has_value());
  EXPECT_TRUE(r.ToJson()["minimum_passing_size"].is_null());
}

TEST(SensitivityTest, BudgetFailureCountsAsFailingSubsample) {
  Table t = BalancedCategoricalTable(80);
  std::vector<std::string> qids = {"segment"};
  SensitivityConfig cfg = FixtureConfig(100, 60);
  cfg.anonymizer.max_suppression_frac = 0.05;
  ASSERT_OK_AND_ASSIGN(SensitivityReport r,
                       SensitivityAnalysis(t, qids, {}, cfg));
  EXPECT_FALSE(r.SizePasses(100));
  EXPECT_THAT(r.failure_summary[100], HasSubstr("anonymization x5"));
}

TEST(SensitivityTest, ByteReproducibleAcrossJobs) {
  Table t = BalancedCategoricalTable(80);
  std::vector<std::string> qids = {"segment"};
  SensitivityConfig cfg = FixtureConfig(200, 60);
  cfg.jobs = 1;
  ASSERT_OK_AND_ASSIGN(SensitivityReport a,
                       SensitivityAnalysis(t, qids, {}, cfg));
  cfg.jobs = 4;
  ASSERT_OK_AND_ASSIGN(SensitivityReport b,
                       SensitivityAnalysis(t, qids, {}, cfg));
  EXPECT_EQ(a.ToJson().dump(), b.ToJson().dump());
  EXPECT_EQ(FormatSensitivityPlotData(a), FormatSensitivityPlotData(b));
}

TEST(SensitivityTest, Errors) {
  Table t = BalancedCategoricalTable(20);
  std::vector<std::string> qids = {"segment"};
  SensitivityConfig cfg = FixtureConfig(60, 2);
  absl::StatusOr<SensitivityReport> small = SensitivityAnalysis(t, qids, {}, cfg);
  EXPECT_EQ(small.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(small.status().message(), HasSubstr("table too small"));
  cfg = FixtureConfig(0, 2);
  EXPECT_FALSE(cfg.Validate().ok());
  cfg = FixtureConfig(10, 2);
  cfg.step_frac = 0.0;
  EXPECT_FALSE(cfg.Validate().ok());
  cfg = FixtureConfig(10, 2);
  cfg.max_size_factor = 0.5;
  EXPECT_FALSE(cfg.Validate().ok());
  cfg = FixtureConfig(10, 1);
  EXPECT_FALSE(cfg.Validate().ok());
}

TEST(PlotDataTest, RoundTrip) {
  Table t = BalancedCategoricalTable(80);
  std::vector<std::string> qids = {"segment"};
  ASSERT_OK_AND_ASSIGN(SensitivityReport r,
                       SensitivityAnalysis(t, qids, {}, FixtureConfig(200, 60)));
  const std::string text = FormatSensitivityPlotData(r);
  EXPECT_EQ(text.rfind("size,subsample_index,metric,column,value,passed\n", 0),
            0u);
  ASSERT_OK_AND_ASSIGN(std::vector<PlotRow> rows,
                       ParseSensitivityPlotData(text));
  EXPECT_EQ(rows, SensitivityPlotRows(r));
  EXPECT_FALSE(ParseSensitivityPlotData("size,x\n").ok());
  const std::string path = ::testing::TempDir() + "/plot.csv";
  ASSERT_OK(EmitSensitivityPlotData(r, path));
}

}  // namespace
}  // namespace dqm
