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

#include "dqm/synthetic.h"

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dqm {
namespace {

using ::testing::IsEmpty;

double Mean(absl::Span<const double> v) {
  double s = 0;
  size_t n = 0;
  for (double x : v) {
    if (IsMissing(x)) continue;
    s += x;
    ++n;
  }
  return s / n;
}

std::map<std::string, double> Frequencies(
    absl::Span<const std::optional<std::string>> v) {
  std::map<std::string, double> f;
  for (const auto& c : v) f[c.value_or("")] += 1.0 / v.size();
  return f;
}

double Correlation(absl::Span<const double> a, absl::Span<const double> b) {
  const double ma = Mean(a), mb = Mean(b);
  double sab = 0, saa = 0, sbb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

TEST(AdultLikeSourceTest, SchemaAndTrees) {
  ASSERT_OK_AND_ASSIGN(Table t, AdultLikeSource(500, 1));
  EXPECT_EQ(t.num_rows(), 500u);
  EXPECT_EQ(t.ColumnsWithRole(ColumnRole::kSensitiveAttribute),
            std::vector<std::string>{"race"});
  EXPECT_EQ(t.ColumnsWithRole(ColumnRole::kQuasiIdentifier).size(), 11u);
  GTreeMap trees = AdultLikeGTrees();
  for (const auto& [name, tree] : trees) {
    EXPECT_THAT(tree.Validate(), IsEmpty()) << name;
    ASSERT_OK_AND_ASSIGN(auto cells, t.Categorical(name));
    for (const auto& c : cells) {
      if (c.has_value()) EXPECT_TRUE(tree.HasLeaf(*c)) << name << " " << *c;
    }
  }
}

TEST(AdultLikeSourceTest, Deterministic) {
  ASSERT_OK_AND_ASSIGN(Table a, AdultLikeSource(300, 5));
  ASSERT_OK_AND_ASSIGN(Table b, AdultLikeSource(300, 5));
  ASSERT_OK_AND_ASSIGN(Table c, AdultLikeSource(300, 6));
  EXPECT_EQ(FormatTable(a), FormatTable(b));
  EXPECT_NE(FormatTable(a), FormatTable(c));
}

TEST(CopulaGeneratorTest, PreservesMarginals) {
  ASSERT_OK_AND_ASSIGN(Table source, AdultLikeSource(50000, 2));
  ASSERT_OK_AND_ASSIGN(auto gen, CopulaGenerator::Fit(source, 3));
  EXPECT_EQ(gen->max_rows(), 50000u);
  ASSERT_OK_AND_ASSIGN(Table sample, gen->Sample(50000, 4));
  EXPECT_EQ(sample.schema(), source.schema());
  for (const ColumnSchema& col : source.schema()) {
    if (col.kind == ColumnKind::kNumerical) {
      const double want = Mean(*source.Numeric(col.name));
      const double got = Mean(*sample.Numeric(col.name));
      EXPECT_NEAR(got, want, 0.05 * std::abs(want)) << col.name;
    } else {
      auto want = Frequencies(*source.Categorical(col.name));
      auto got = Frequencies(*sample.Categorical(col.name));
      for (const auto& [token, f] : want) {
        EXPECT_NEAR(got[token], f, 0.02) << col.name << " " << token;
      }
    }
  }
}

TEST(CopulaGeneratorTest, PreservesNumericalDependence) {
  ASSERT_OK_AND_ASSIGN(Table source, AdultLikeSource(5000, 7));
  ASSERT_OK_AND_ASSIGN(auto gen, CopulaGenerator::Fit(source, 8));
  ASSERT_OK_AND_ASSIGN(Table sample, gen->Sample(5000, 9));
  const double want = Correlation(*source.Numeric("age"),
                                  *source.Numeric("hours_per_week"));
  const double got = Correlation(*sample.Numeric("age"),
                                 *sample.Numeric("hours_per_week"));
  EXPECT_NEAR(got, want, 0.1);
}

TEST(CopulaGeneratorTest, SeedsAndLimits) {
  ASSERT_OK_AND_ASSIGN(Table source, AdultLikeSource(400, 1));
  ASSERT_OK_AND_ASSIGN(auto gen, CopulaGenerator::Fit(source, 1));
  ASSERT_OK_AND_ASSIGN(Table a, gen->Sample(200, 5));
  ASSERT_OK_AND_ASSIGN(Table b, gen->Sample(200, 5));
  ASSERT_OK_AND_ASSIGN(Table c, gen->Sample(200, 6));
  EXPECT_EQ(FormatTable(a), FormatTable(b));
  EXPECT_NE(FormatTable(a), FormatTable(c));
  EXPECT_FALSE(gen->Sample(401, 1).ok());
  ASSERT_OK_AND_ASSIGN(Table tiny, AdultLikeSource(kMinFitRows - 1, 1));
  absl::StatusOr<std::unique_ptr<CopulaGenerator>> bad =
      CopulaGenerator::Fit(tiny, 1);
  EXPECT_FALSE(bad.ok());
  EXPECT_THAT(bad.status().message(), ::testing::HasSubstr("fit error"));
}

TEST(RandomModelTest, Shape) {
  ASSERT_OK_AND_ASSIGN(RandomModelSample s,
                       GenRandomModel(1000, 0.4, 0.05, std::nullopt, 1));
  ASSERT_EQ(s.x.size(), 1000u);
  for (size_t i = 0; i < s.x.size(); ++i) {
    EXPECT_GE(s.x[i], 0.0);
    EXPECT_LE(s.x[i], 1000.0);
    // t = x + b x y + c z with y, z in [0, 1].
    EXPECT_GE(s.t[i], s.x[i] - 1e-9);
  }
  ASSERT_OK_AND_ASSIGN(RandomModelSample r,
                       GenRandomModel(1000, 0.4, 0.05, -2, 1));
  for (double x : r.x) EXPECT_EQ(std::fmod(x, 100.0), 0.0);
  EXPECT_FALSE(GenRandomModel(10, 1.5, 0.0, std::nullopt, 1).ok());
  ASSERT_OK_AND_ASSIGN(DatasetPair p, RandomModelPair(s));
  EXPECT_EQ(p.anonymized.num_rows(), 1000u);
  EXPECT_FALSE(RandomModelPair({{1, 2}, {1}}).ok());
}

}  // namespace
}  // namespace dqm
