// Copyright 2026 The trsketch Authors
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


#include <filesystem>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "trsketch/experiment.h"
#include "trsketch/instance_io.h"

namespace trsketch {
namespace {

using Json = nlohmann::json;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun Dispatch(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliRun run;
  run.code = CliDispatch(args, out, err);
  run.out = out.str();
  run.err = err.str();
  return run;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::path(::testing::TempDir()) /
           ("cli_test_" + std::string(::testing::UnitTest::GetInstance()
                                          ->current_test_info()
                                          ->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

TEST_F(CliTest, GenerateToStdoutAndFile) {
  const CliRun run = Dispatch({"generate", "--n", "5", "--m", "3", "--seed", "4"});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  const TrsInstance inst = InstanceFromJson(run.out);
  EXPECT_EQ(inst.n(), 5);
  EXPECT_EQ(inst.m(), 3);

  ASSERT_EQ(Dispatch({"generate", "--n", "5", "--m", "3", "--seed", "4", "--out",
                 Path("inst.json")})
                .code,
            kExitOk);
  EXPECT_EQ(ReadTextFile(Path("inst.json")), run.out);
}

TEST_F(CliTest, ProjectSolveFullnessPipeline) {
  ASSERT_EQ(Dispatch({"generate", "--n", "20", "--m", "6", "--model", "quadratic", "--rank",
                 "3", "--out", Path("inst.json")})
                .code,
            kExitOk);
  const CliRun project =
      Dispatch({"project", "--in", Path("inst.json"), "--d", "5", "--eps", "0.1",
           "--direction", "plus", "--convention", "orthonormal-rows", "--out",
           Path("plus.json"), "--projector-out", Path("p.bin")});
  ASSERT_EQ(project.code, kExitOk) << project.err;
  EXPECT_TRUE(std::filesystem::exists(Path("p.bin")));

  const CliRun solve = Dispatch({"solve", "--in", Path("plus.json"), "--projected"});
  ASSERT_EQ(solve.code, kExitOk) << solve.err;
  EXPECT_EQ(Json::parse(solve.out)["status"], "optimal");

  const CliRun local = Dispatch({"solve", "--in", Path("inst.json"), "--method", "local",
                            "--starts", "2"});
  ASSERT_EQ(local.code, kExitOk) << local.err;

  const CliRun full = Dispatch({"fullness", "--in", Path("inst.json")});
  ASSERT_EQ(full.code, kExitOk) << full.err;
  EXPECT_GE(Json::parse(full.out)["r"].get<double>(), 0.1 - 1e-6);
}

TEST_F(CliTest, BallQpRequiresNoConstraints) {
  ASSERT_EQ(Dispatch({"generate", "--n", "4", "--m", "2", "--out", Path("inst.json")}).code,
            kExitOk);
  const CliRun run = Dispatch({"solve", "--in", Path("inst.json"), "--method", "ball-qp"});
  EXPECT_EQ(run.code, kExitFailure);
  EXPECT_NE(run.err.find("ball-qp requires m=0"), std::string::npos);

  ASSERT_EQ(Dispatch({"generate", "--n", "4", "--m", "0", "--out", Path("free.json")}).code,
            kExitOk);
  const CliRun ok = Dispatch({"solve", "--in", Path("free.json"), "--method", "ball-qp"});
  EXPECT_EQ(ok.code, kExitOk) << ok.err;
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(Dispatch({"generate", "--n", "5", "--m", "2", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(Dispatch({"generate", "--n", "5"}).code, kExitUsage);
  EXPECT_EQ(Dispatch({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Dispatch({}).code, kExitUsage);
  EXPECT_EQ(Dispatch({"solve", "--in", "x", "--method", "simplex"}).code, kExitUsage);
  const CliRun help = Dispatch({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("experiment"), std::string::npos);
}

TEST_F(CliTest, RuntimeErrorsExitTwo) {
  const CliRun run = Dispatch({"solve", "--in", Path("missing.json")});
  EXPECT_EQ(run.code, kExitFailure);
  EXPECT_NE(run.err.find("missing.json"), std::string::npos);
  EXPECT_EQ(Dispatch({"generate", "--n", "1", "--m", "1"}).code, kExitFailure);
}

TEST_F(CliTest, ExperimentAndReport) {
  WriteTextFile(Path("cfg.json"),
                R"({"n": 20, "m": 5, "d": 6, "trials": 4, "epsilon": 0.15})");
  const CliRun run = Dispatch({"experiment", "--config", Path("cfg.json"), "--out-dir",
                          Path("runs"), "--threads", "2"});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  EXPECT_TRUE(std::filesystem::exists(Path("runs/trials.csv")));
  EXPECT_TRUE(std::filesystem::exists(Path("runs/summary.json")));
  EXPECT_NE(run.out.find("trials=4"), std::string::npos);

  const CliRun report = Dispatch({"report", "--csv", Path("runs/trials.csv")});
  ASSERT_EQ(report.code, kExitOk) << report.err;
  EXPECT_NE(report.out.find("lift_feasible_minus"), std::string::npos);
  ASSERT_EQ(Dispatch({"report", "--csv", Path("runs/trials.csv"), "--out",
                 Path("summary.json")})
                .code,
            kExitOk);
  EXPECT_EQ(Json::parse(ReadTextFile(Path("summary.json")))["counts"]["trials"], 4);

  WriteTextFile(Path("bad.json"), R"({"n": 20, "unknown_key": 1})");
  EXPECT_EQ(Dispatch({"experiment", "--config", Path("bad.json"), "--out-dir",
                 Path("runs2")})
                .code,
            kExitFailure);
}

TEST_F(CliTest, CheckLemmasPrintsReports) {
  const CliRun run = Dispatch({"check-lemmas", "--n", "300", "--d", "60", "--trials", "200"});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  for (const char* name : {"gram_deviation", "norm_preservation", "inner_product",
                           "linear_map", "quadratic_form"}) {
    EXPECT_NE(run.out.find(name), std::string::npos) << name;
  }
}

TEST_F(CliTest, CheckLemmasReferenceRegime) {
  const CliRun run = Dispatch({"check-lemmas", "--n", "1000", "--d", "200", "--eps", "0.3",
                          "--convention", "inv-sqrt-d", "--trials", "1000"});
  ASSERT_EQ(run.code, kExitOk) << run.err;
  std::smatch match;
  const std::regex norm_line(R"(norm_preservation: .* fraction=([0-9.]+))");
  ASSERT_TRUE(std::regex_search(run.out, match, norm_line)) << run.out;
  EXPECT_GE(std::stod(match[1]), 0.95);
}

}  // namespace
}  // namespace trsketch
