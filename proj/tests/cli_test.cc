// Copyright 2026 The Privleak Authors
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


// Runs the command-line binary end to end.

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "oracle.h"

namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;

struct Result {
  int exit_code = -1;
  std::string out;
};

std::string Data(const std::string& name) {
  return std::string(PRIVLEAK_TEST_DATA) + "/" + name;
}

std::filesystem::path Scratch() {
  std::filesystem::path dir =
      std::filesystem::path(::testing::TempDir()) / "privleak_cli";
  std::filesystem::create_directories(dir);
  return dir;
}

// Runs the CLI with stderr discarded unless `with_stderr`.
Result RunCli(const std::string& args, bool with_stderr = false) {
  const std::string command = std::string("'") + PRIVLEAK_CLI + "' " + args +
                              (with_stderr ? " 2>&1" : " 2>/dev/null");
  Result result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buffer;
  size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.out.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

TEST(CliTest, EntropyText) {
  Result r = RunCli("entropy --table " + Data("single_variable.csv") +
                 " --unit bits");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out,
            "H(S)=1.000000 bits\n"
            "H(X)=0.970951 bits\n"
            "H(S|X)=0.875489 bits\n"
            "H(X,S)=1.846439 bits\n");
}

TEST(CliTest, MutualInformationText) {
  Result r =
      RunCli("mi --table " + Data("single_variable.csv") + " --unit bits");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_THAT(r.out, StartsWith("I(X;S)=0.124511 bits\n"));
  r = RunCli("mi --table " + Data("product.csv"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_THAT(r.out, StartsWith("I(X;S)=0.000000 nats\n"));
}

TEST(CliTest, MachineUnitsDifferByLn2) {
  const std::string base = "mi --format machine --table " +
                           Data("single_variable.csv");
  Result nats = RunCli(base + " --unit nats");
  Result bits = RunCli(base + " --unit bits");
  ASSERT_EQ(nats.exit_code, 0);
  ASSERT_EQ(bits.exit_code, 0);
  const double n = nlohmann::json::parse(nats.out)["mi"].get<double>();
  const double b = nlohmann::json::parse(bits.out)["mi"].get<double>();
  EXPECT_NEAR(n, b * std::numbers::ln2, 1e-15);
  EXPECT_NEAR(b, 0.12451124978365313, 1e-12);
}

TEST(CliTest, IntersectionReport) {
  Result r = RunCli("mi --all-subsets --table " + Data("intersecting.csv") +
                 " --schema " + Data("intersecting_schema.json"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_THAT(r.out, HasSubstr("I(X;sex)=0.086305 nats\n"));
  EXPECT_THAT(r.out, HasSubstr("I(X;disability)=0.004022 nats\n"));
  EXPECT_THAT(r.out, HasSubstr("I(X;sex+disability)=0.091436 nats\n"));
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(RunCli("entropy --table " + Data("nope.csv")).exit_code, 2);
  EXPECT_EQ(RunCli("entropy --table " + Data("not_a_number.csv")).exit_code, 2);
  Result bad = RunCli("entropy --table " + Data("bad_rowsum.csv"), true);
  EXPECT_EQ(bad.exit_code, 3);
  EXPECT_THAT(bad.out, HasSubstr("deviating from 1"));
  EXPECT_EQ(RunCli("entropy --no-such-flag").exit_code, 2);
  EXPECT_EQ(RunCli("frobnicate").exit_code, 2);
  EXPECT_EQ(RunCli("--help").exit_code, 0);
  EXPECT_EQ(RunCli("price --policy " + Data("policy_per_bit.json") +
                " --leakage -1")
                .exit_code,
            3);
  EXPECT_EQ(RunCli("audit --policy " + Data("policy_calibrated.json") +
                " --events " + Data("after_closure.jsonl"))
                .exit_code,
            3);
}

TEST(CliTest, PriceLinear) {
  Result r = RunCli("price --policy " + Data("policy_per_bit.json") +
                 " --leakage 0.136 --unit bits");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out,
            "rule=linear\n"
            "leakage=0.136000 bits\n"
            "production=0.0000 USD\n"
            "surcharge=13600.0000 USD\n"
            "total=13600.0000 USD\n");
}

TEST(CliTest, PriceExposureAndWeighted) {
  Result r = RunCli("price --rule exposure --policy " +
                 Data("policy_exposure.json") + " --table " +
                 Data("single_variable.csv"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_THAT(r.out, HasSubstr("surcharge=62255.6249 USD\n"));
  r = RunCli("price --rule weighted --policy " + Data("policy_weighted.json") +
          " --table " + Data("intersecting.csv") + " --schema " +
          Data("intersecting_schema.json"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_THAT(r.out, HasSubstr("rule=weighted\n"));
}

TEST(CliTest, Calibrate) {
  Result r = RunCli("calibrate --pi-max 500000 --entropy 5.3");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out,
            "lambda=94339.6226 per nat\n"
            "lambda=65391.2434 per bit\n");
}

TEST(CliTest, AuditIsByteIdenticalAcrossRuns) {
  const std::string args = "audit --policy " + Data("policy_calibrated.json") +
                           " --events " + Data("two_events.jsonl");
  Result a = RunCli(args);
  Result b = RunCli(args);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_THAT(a.out, HasSubstr("Grand total: 3773.5859 USD\n"));
  EXPECT_THAT(a.out, HasSubstr("mutually independent"));

  const std::filesystem::path ledger = Scratch() / "ledger.jsonl";
  std::filesystem::remove(ledger);
  ASSERT_EQ(RunCli(args + " --ledger " + ledger.string()).exit_code, 0);
  const std::string first = ReadAll(ledger);
  ASSERT_EQ(RunCli(args + " --ledger " + ledger.string()).exit_code, 0);
  EXPECT_EQ(ReadAll(ledger), first);
  Result report = RunCli("report --ledger " + ledger.string());
  ASSERT_EQ(report.exit_code, 0);
  EXPECT_EQ(report.out, a.out);
}

TEST(CliTest, EmptyAuditChargesProductionCost) {
  Result r = RunCli("audit --policy " + Data("policy_calibrated.json") +
                 " --events " + Data("empty.jsonl") + " --session empty");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_THAT(r.out, HasSubstr("Session empty\n"));
  EXPECT_THAT(r.out, HasSubstr("Grand total: 0.0010 USD\n"));
}

TEST(CliTest, GaussianEstimate) {
  std::vector<double> s, x;
  privleak::oracle::GaussianPairs(4242, 2000, 0.8, s, x);
  const std::filesystem::path dir = Scratch();
  {
    std::ofstream csv(dir / "gauss.csv");
    csv << "s,x\n";
    char line[64];
    for (size_t i = 0; i < s.size(); ++i) {
      std::snprintf(line, sizeof line, "%.17g,%.17g\n", s[i], x[i]);
      csv << line;
    }
    std::ofstream schema(dir / "gauss.json");
    schema << R"({"attributes": [{"name": "s", "kind": "continuous",
                    "range": [-50, 50]}],
                  "observable": {"name": "x", "kind": "continuous",
                    "range": [-50, 50]}})";
  }
  const std::string args = "estimate --format machine --seed 1 --schema " +
                           (dir / "gauss.json").string() + " --samples " +
                           (dir / "gauss.csv").string();
  Result a = RunCli(args);
  Result b = RunCli(args);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  nlohmann::json doc = nlohmann::json::parse(a.out);
  EXPECT_EQ(doc["method"], "kde-monte-carlo");
  EXPECT_NEAR(doc["mi_nats"].get<double>(),
              static_cast<double>(privleak::oracle::GaussianMi(0.8L)), 0.08);

  Result binned = RunCli(args + " --bins 's=quantile:4;x=quantile:4'");
  ASSERT_EQ(binned.exit_code, 0);
  EXPECT_EQ(nlohmann::json::parse(binned.out)["method"], "plug-in-counts");
}

TEST(CliTest, CurveSweepWritesOneFilePerMultiplier) {
  const std::filesystem::path out = Scratch() / "curve.csv";
  Result r = RunCli("curve --policy " + Data("policy_curve.json") +
                 " --lambda 1 --lambda 2 --from 0 --to 1 --step 0.5 --out " +
                 out.string());
  ASSERT_EQ(r.exit_code, 0);
  const std::filesystem::path one = Scratch() / "curve_lambda1.csv";
  const std::filesystem::path two = Scratch() / "curve_lambda2.csv";
  ASSERT_TRUE(std::filesystem::exists(one)) << r.out;
  ASSERT_TRUE(std::filesystem::exists(two));
  EXPECT_EQ(ReadAll(one),
            "leakage,value\n0.000000,1.0000\n0.500000,1.5000\n"
            "1.000000,2.0000\n");
  EXPECT_EQ(ReadAll(two),
            "leakage,value\n0.000000,1.0000\n0.500000,2.0000\n"
            "1.000000,3.0000\n");
}

}  // namespace
