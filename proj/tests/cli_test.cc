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
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "nlohmann/json.hpp"
#include "test_util.h"

namespace dqm::cli {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "dqm");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = Run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string ReadAll(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteAll(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string Example(const std::string& name) const {
    return (fs::path(DQM_SOURCE_DIR) / "data" / "example" / name).string();
  }
  std::string OutDir() const { return (dir_ / "out").string(); }
  fs::path dir_;
};

TEST_F(CliTest, MetricsOnExampleFailsQuality) {
  Outcome r = RunCli({"metrics", "--config", Example("config.json"),
                      "--out-dir", OutDir()});
  EXPECT_EQ(r.code, kExitQualityFail) << r.err;
  nlohmann::json report =
      nlohmann::json::parse(ReadAll(fs::path(OutDir()) / "metrics_report.json"));
  EXPECT_EQ(report["passed"], false);
  EXPECT_DOUBLE_EQ(report["pctns"].get<double>(), 0.8);
  EXPECT_DOUBLE_EQ(report["dataset_level"]["rilm_numerical"].get<double>(), 0.5);
  EXPECT_THAT(ReadAll(fs::path(OutDir()) / "metrics_report.csv"),
              HasSubstr("dataset,pctns,0.8,0.99,false"));
}

TEST_F(CliTest, MetricsPassWithLenientThresholds) {
  const fs::path cfg = dir_ / "cfg.json";
  WriteAll(cfg, R"({"id_column": "user_id",
    "schema": [{"name": "n_accept", "kind": "numerical"},
               {"name": "n_reject", "kind": "numerical"}],
    "thresholds": {"pearson": 0.5, "pctns": 0.5, "nmiv1": 0.0}})");
  Outcome r = RunCli({"metrics", "--config", cfg.string(), "--out-dir",
                      OutDir(), Example("original.csv"),
                      Example("anonymized.csv")});
  EXPECT_EQ(r.code, kExitOk) << r.err << r.out;
}

TEST_F(CliTest, MetricsAnonymizesWhenOnlyOriginalGiven) {
  const fs::path cfg = dir_ / "cfg.json";
  WriteAll(cfg, R"({"id_column": "user_id",
    "schema": [{"name": "n_accept", "kind": "numerical"},
               {"name": "n_reject", "kind": "numerical"}]})");
  Outcome r = RunCli({"metrics", "--config", cfg.string(), "--k", "2",
                      "--out-dir", OutDir(), Example("original.csv")});
  EXPECT_EQ(r.code, kExitQualityFail) << r.err;
  EXPECT_TRUE(fs::exists(fs::path(OutDir()) / "anonymized.csv"));
  EXPECT_EQ(ReadAll(fs::path(OutDir()) / "suppressed.csv"), "user_id\n5\n");
}

TEST_F(CliTest, AnonymizeReproducesExample) {
  Outcome r = RunCli({"anonymize", "--config", Example("config.json"),
                      "--out-dir", OutDir()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(ReadAll(fs::path(OutDir()) / "anonymized.csv"),
            ReadAll(Example("anonymized.csv")));
  EXPECT_THAT(r.out, HasSubstr("1 suppressed"));
}

TEST_F(CliTest, EnvironmentOverridesApply) {
  setenv("DQM_K", "5", 1);
  Outcome r = RunCli({"anonymize", "--config", Example("config.json"),
                      "--out-dir", OutDir()});
  unsetenv("DQM_K");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, HasSubstr("k=5"));
  EXPECT_THAT(r.out, HasSubstr("1 classes, 0 suppressed"));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(RunCli({}).code, kExitUsage);
  EXPECT_EQ(RunCli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"metrics", "--k", "two"}).code, kExitUsage);
  Outcome missing = RunCli({"metrics", "--config", (dir_ / "nope.json").string()});
  EXPECT_EQ(missing.code, kExitUsage);
  EXPECT_THAT(missing.err, HasSubstr("config not found"));
  EXPECT_EQ(RunCli({"metrics", "--config", Example("config.json"), "--metrics",
                    "nmiv9"})
                .code,
            kExitUsage);
  EXPECT_EQ(RunCli({"metrics", "--config", Example("config.json"), "--alpha",
                    "1.5"})
                .code,
            kExitUsage);
  Outcome no_schema = RunCli({"anonymize", Example("original.csv")});
  EXPECT_EQ(no_schema.code, kExitUsage);
  EXPECT_THAT(no_schema.err, HasSubstr("schema not found"));
  EXPECT_EQ(RunCli({"minimize", "--config", Example("config.json"),
                    Example("original.csv")})
                .code,
            kExitUsage);
  const fs::path bad = dir_ / "bad.json";
  WriteAll(bad, R"({"thresholds": {"pearsn": 1}})");
  EXPECT_EQ(RunCli({"metrics", "--config", bad.string()}).code, kExitUsage);
  WriteAll(bad, "{not json");
  EXPECT_EQ(RunCli({"metrics", "--config", bad.string()}).code, kExitUsage);
}

TEST_F(CliTest, HelpExitsZero) {
  Outcome r = RunCli({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_THAT(r.out, HasSubstr("justify"));
}

TEST_F(CliTest, RuntimeErrors) {
  Outcome r = RunCli({"anonymize", "--config", Example("config.json"),
                      "--out-dir", OutDir(), (dir_ / "absent.csv").string()});
  EXPECT_EQ(r.code, kExitRuntime);
  const fs::path ragged = dir_ / "ragged.csv";
  WriteAll(ragged, "user_id,n_accept,n_reject\n1,2\n");
  EXPECT_EQ(RunCli({"anonymize", "--config", Example("config.json"),
                    "--out-dir", OutDir(), ragged.string()})
                .code,
            kExitRuntime);
}

TEST_F(CliTest, JustifyWritesArtifacts) {
  const fs::path cfg = dir_ / "cfg.json";
  WriteAll(cfg, R"({"justify": {"synthetic_rows": 800, "n_generators": 1,
    "runs_per_generator": 3, "row_counts": [400], "k_values": [2, 10],
    "metrics": ["nmiv1", "pctns"]}})");
  Outcome r = RunCli({"justify", "--config", cfg.string(), "--out-dir",
                      OutDir(), "--seed", "3", "--jobs", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* f : {"labels.csv", "evaluations.json", "curves.csv",
                        "summary.json", "comparison.json"}) {
    EXPECT_TRUE(fs::exists(fs::path(OutDir()) / f)) << f;
  }
  nlohmann::json summary =
      nlohmann::json::parse(ReadAll(fs::path(OutDir()) / "summary.json"));
  EXPECT_EQ(summary["applications"], 6);
  EXPECT_THAT(r.out, HasSubstr("nmiv1 vs pctns"));
}

TEST_F(CliTest, MinimizeWritesArtifactsReproducibly) {
  const fs::path table = dir_ / "segments.csv";
  WriteTable(testing::BalancedCategoricalTable(80), table.string());
  const fs::path cfg = dir_ / "cfg.json";
  WriteAll(cfg, R"({"schema": [{"name": "segment", "kind": "categorical"}],
    "anonymizer": {"k": 60, "generalization_limit": 0.5},
    "minimize": {"input": "segments.csv", "n": 200}})");
  Outcome a = RunCli({"minimize", "--config", cfg.string(), "--out-dir",
                      OutDir() + "_a", "--seed", "4"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  Outcome b = RunCli({"minimize", "--config", cfg.string(), "--out-dir",
                      OutDir() + "_b", "--seed", "4", "--jobs", "3"});
  ASSERT_EQ(b.code, kExitOk) << b.err;
  EXPECT_THAT(a.out, HasSubstr("minimum passing size"));
  for (const char* f : {"sensitivity_report.json", "sensitivity_plot.csv",
                        "analysis_sample_ids.csv"}) {
    EXPECT_EQ(ReadAll(fs::path(OutDir() + "_a") / f),
              ReadAll(fs::path(OutDir() + "_b") / f))
        << f;
  }
}

TEST(LoadRunConfigTest, OverridesWinOverConfig) {
  Overrides o;
  o.config = std::string(DQM_SOURCE_DIR) + "/data/example/config.json";
  o.k = 3;
  o.seed = 11;
  o.metrics = "nmiv1, ilm";
  ASSERT_OK_AND_ASSIGN(RunConfig cfg, LoadRunConfig(o));
  EXPECT_EQ(cfg.anonymizer.k, 3);
  EXPECT_EQ(cfg.seed, 11u);
  EXPECT_EQ(cfg.nmi.seed, 11u);
  EXPECT_EQ(cfg.metrics, (std::vector<std::string>{"nmiv1", "ilm"}));
  EXPECT_EQ(cfg.csv.id_column, "user_id");
  ASSERT_TRUE(cfg.original.has_value());
  EXPECT_TRUE(fs::exists(*cfg.original));
  EXPECT_EQ(cfg.thresholds.pearson_min, 0.90);
}

}  // namespace
}  // namespace dqm::cli
