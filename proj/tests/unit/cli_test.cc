// Copyright 2026 The AtlasKit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "atlas/run_data.h"
#include "atlas/serialize.h"
#include "output.h"

namespace atlas::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "atlaskit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = Run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json ReadJson(const fs::path& p) { return Json::parse(Slurp(p)); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const char* base = std::getenv("ATLASKIT_TEST_TMP");
    root_ = fs::path(base ? base : fs::temp_directory_path().string()) /
            ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  std::string Dir(const std::string& name) const { return (root_ / name).string(); }

  fs::path root_;
};

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
  EXPECT_EQ(Invoke({"bogus"}).code, kExitUsage);
  const auto missing = Invoke({"fit", "--runs", "x.csv"});
  EXPECT_EQ(missing.code, kExitUsage);
  EXPECT_NE(missing.err.find("--out"), std::string::npos);
  const auto plan = Invoke({"plan", "--out", Dir("p"), "--r", "4", "--phi-alpha", "0.2"});
  EXPECT_EQ(plan.code, kExitUsage);
  EXPECT_FALSE(fs::exists(Dir("p")));  // checked before any output
}

TEST_F(CliTest, DataErrorsLeaveFailureMarker) {
  const fs::path runs = root_ / "runs.csv";
  std::ofstream(runs) << "run_id,n_params\nr1,abc\n";
  const auto r = Invoke({"fit", "--runs", runs.string(), "--catalog", runs.string(),
                         "--out", Dir("fit")});
  EXPECT_EQ(r.code, kExitDataError);
  const std::string marker = Slurp(root_ / "fit" / kFailedMarker);
  EXPECT_NE(marker.find("runs.csv"), std::string::npos);
  EXPECT_EQ(ReadJson(root_ / "fit" / kMetaSidecar)["status"], "failed");

  const auto ext = Invoke({"fit", "--runs", (root_ / "runs.txt").string(), "--catalog",
                           runs.string(), "--out", Dir("fit2")});
  EXPECT_EQ(ext.code, kExitUsage);
  EXPECT_TRUE(fs::exists(root_ / "fit2" / kFailedMarker));
}

TEST_F(CliTest, PlanReproducesFourfoldMultipliers) {
  const auto r = Invoke({"plan", "--r", "4", "--phi-alpha", "0.2427", "--psi-beta",
                         "-0.2727", "--out", Dir("plan")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = ReadJson(root_ / "plan" / "plan.json");
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_NEAR(j["optimum"]["n_ratio"].get<double>(), 1.40, 0.01);
  EXPECT_NEAR(j["optimum"]["d_tot_ratio"].get<double>(), 2.74, 0.01);
  EXPECT_NEAR(j["optimum"]["c_ratio"].get<double>(), 3.84, 0.02);
  EXPECT_EQ(j["config"]["r"], 4.0);
  EXPECT_FALSE(fs::exists(root_ / "plan" / kFailedMarker));
  EXPECT_EQ(ReadJson(root_ / "plan" / kMetaSidecar)["status"], "ok");
}

TEST_F(CliTest, ConfigFileWithFlagPrecedence) {
  const fs::path cfg = root_ / "plan.toml";
  std::ofstream(cfg) << "[plan]\nr = 2\nalpha = 0.3\nbeta = 0.3\nphi = 0.1\npsi = -0.05\n";
  ASSERT_EQ(Invoke({"--config", cfg.string(), "plan", "--out", Dir("a")}).code, kExitOk);
  EXPECT_EQ(ReadJson(root_ / "a" / "plan.json")["r"], 2.0);
  ASSERT_EQ(Invoke({"--config", cfg.string(), "plan", "--r", "3", "--out", Dir("b"),
                    "--emit-plot-data"})
                .code,
            kExitOk);
  const Json b = ReadJson(root_ / "b" / "plan.json");
  EXPECT_EQ(b["r"], 3.0);
  EXPECT_EQ(b["config"]["alpha"], 0.3);
  EXPECT_TRUE(fs::exists(root_ / "b" / "plot_isoloss_frontier.csv"));
}

TEST_F(CliTest, SynthThenEvalWithGeneratingLaw) {
  ASSERT_EQ(Invoke({"synth", "--preset", "saturation", "--noise", "0", "--out", Dir("data")})
                .code,
            kExitOk);
  const auto data = root_ / "data";
  for (const char* f : {"runs.jsonl", "catalog.csv", "truth.json", "synth.json"}) {
    EXPECT_TRUE(fs::exists(data / f)) << f;
  }
  const auto r = Invoke({"eval", "--runs", (data / "runs.jsonl").string(), "--catalog",
                         (data / "catalog.csv").string(), "--params",
                         (data / "truth.json").string(), "--out", Dir("eval")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = ReadJson(root_ / "eval" / "eval.json");
  ASSERT_EQ(j["axes"].size(), 5u);
  for (const auto& a : j["axes"]) EXPECT_NEAR(a["r2"].get<double>(), 1.0, 1e-9) << a["axis"];
  EXPECT_NE(r.out.find("R2(M)"), std::string::npos);
}

TEST_F(CliTest, FitIsByteIdenticalAcrossReruns) {
  ASSERT_EQ(Invoke({"synth", "--preset", "recovery", "--format", "csv", "--seed", "3",
                    "--out", Dir("data")})
                .code,
            kExitOk);
  const std::vector<std::string> args{
      "fit",     "--runs", Dir("data") + "/runs.csv", "--catalog", Dir("data") + "/catalog.csv",
      "--law",   "bsl",    "--seed",                  "5",         "--out",
      Dir("fit"), "--emit-plot-data"};
  ASSERT_EQ(Invoke(args).code, kExitOk);
  const std::string first = Slurp(root_ / "fit" / "fit.json");
  const std::string plot = Slurp(root_ / "fit" / "plot_scaling_trajectories.csv");
  ASSERT_EQ(Invoke(args).code, kExitOk);
  EXPECT_EQ(Slurp(root_ / "fit" / "fit.json"), first);
  EXPECT_EQ(Slurp(root_ / "fit" / "plot_scaling_trajectories.csv"), plot);
  const Json j = Json::parse(first);
  EXPECT_EQ(j["kind"], "atlas_law_set");
  EXPECT_EQ(j["laws"][0]["spec"]["target_language"], "sw");
  EXPECT_EQ(j["config"]["law"], "bsl");
}

TEST_F(CliTest, TransferFillsMissingPairs) {
  ASSERT_EQ(Invoke({"synth", "--preset", "transfer", "--languages", "a,b,c,d,e", "--noise",
                    "0", "--format", "csv", "--out", Dir("data")})
                .code,
            kExitOk);
  // Drop the bilingual curves of source "e" so its row must be estimated.
  std::ifstream in(root_ / "data" / "curves.csv");
  auto curves = ParseCurves(in, TableFormat::kCsv);
  std::erase_if(curves, [](const LearningCurve& c) { return c.regime_id() == "bi:e"; });
  {
    std::ofstream out(root_ / "partial.csv");
    WriteCurves(out, curves, TableFormat::kCsv);
  }
  const auto r = Invoke({"transfer", "--curves", (root_ / "partial.csv").string(), "--trees",
                         "50", "--cv", "4", "--out", Dir("t"), "--emit-plot-data"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = ReadJson(root_ / "t" / "transfer.json");
  EXPECT_EQ(j["measured"].size(), 16u);
  EXPECT_EQ(j["provenance"][4][0], "estimated");
  EXPECT_EQ(j["provenance"][0][4], "measured");
  EXPECT_EQ(j["provenance"][2][2], "n/a");
  EXPECT_EQ(j["forest"]["n_trees"], 50);
  EXPECT_TRUE(j["cross_validation"].is_object());
  const Json truth = ReadJson(root_ / "data" / "truth.json");
  for (const auto& m : j["measured"]) {
    for (const auto& t : truth["bts"]) {
      if (t["source"] == m["source"] && t["target"] == m["target"]) {
        // Curves are sampled on a 40-point grid; truth is analytic.
        EXPECT_NEAR(m["bts"].get<double>(), t["bts"].get<double>(), 5e-3);
      }
    }
  }
  EXPECT_TRUE(fs::exists(root_ / "t" / "transfer_matrix.csv"));
  EXPECT_TRUE(fs::exists(root_ / "t" / "plot_transfer_heatmap.csv"));
}

TEST_F(CliTest, CrossoverFitAndDecision) {
  ASSERT_EQ(Invoke({"synth", "--preset", "crossover", "--noise", "0", "--out", Dir("data")})
                .code,
            kExitOk);
  const auto r = Invoke({"crossover", "--curves", Dir("data") + "/curves.jsonl", "--budget",
                         "1e30", "--n-params", "1e9", "--out", Dir("x")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = ReadJson(root_ / "x" / "crossover.json");
  EXPECT_EQ(j["points"].size(), 6u);
  for (const auto& p : j["points"]) EXPECT_FALSE(p["tokens"].is_null());
  EXPECT_TRUE(j["fit"].is_object());
  EXPECT_EQ(j["decision"]["regime"], "pretrain");
  EXPECT_EQ(Invoke({"crossover", "--curves", Dir("data") + "/curves.jsonl", "--budget", "1e30",
                    "--out", Dir("y")})
                .code,
            kExitUsage);
}

TEST_F(CliTest, CapacityFitFeedsPlanner) {
  ASSERT_EQ(Invoke({"synth", "--preset", "capacity", "--noise", "0", "--out", Dir("data")})
                .code,
            kExitOk);
  ASSERT_EQ(Invoke({"fit", "--capacity", "--runs", Dir("data") + "/runs.jsonl", "--out",
                    Dir("fit")})
                .code,
            kExitOk);
  const auto r = Invoke({"plan", "--params", Dir("fit") + "/capacity_fit.json", "--r", "2",
                         "--out", Dir("plan")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = ReadJson(root_ / "plan" / "plan.json");
  EXPECT_GT(j["optimum"]["n_ratio"].get<double>(), 1.0);  // phi > 0 in the preset
  EXPECT_EQ(j["frontier"].size(), 64u);
}

}  // namespace
}  // namespace atlas::cli
