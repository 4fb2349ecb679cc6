// Copyright 2026 The Orthochain Authors.
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

#include "orthochain/commands.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"

namespace orthochain {
namespace {

using nlohmann::json;

struct CliRun {
  int code;
  std::string out;
  std::string err;
  json Json() const { return json::parse(out); }
};

CliRun Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("orthochain_cli_test_" + name)).string();
}

std::string WriteTemp(const std::string& name, const std::string& body) {
  const std::string path = TempPath(name);
  std::ofstream(path) << body;
  return path;
}

const char* kPower63 = R"({"kind":"power","exponent":1.0,"count":63})";

TEST(CliTest, EvaluateTwoPoint) {
  const CliRun r = Cli({"evaluate", "--coeffs", "0.5", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.Json();
  EXPECT_EQ(j["version"], "v1");
  EXPECT_FALSE(j.contains("timestamp"));
  EXPECT_NEAR(j["functionals"]["strong"]["value"].get<double>(), 0.7071067812, 1e-10);
  EXPECT_NEAR(j["functionals"]["dyadic_bound"].get<double>(), 1.4142135624, 1e-10);
  EXPECT_EQ(j["functionals"]["rademacher_menchov"]["log_base"], "e");
}

TEST(CliTest, EvaluateThreePointFromPairOfHalves) {
  const CliRun r = Cli({"evaluate", "--coeffs", "0.5,0.5", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  // T = {0, 0.25, 0.5} under the uniform measure.
  const double third = 1.0 / 3;
  const double strong_at_0 = 0.5 / std::sqrt(third) + (std::sqrt(0.5) - 0.5) / std::sqrt(2 * third);
  EXPECT_NEAR(r.Json()["functionals"]["strong"]["value"].get<double>(), strong_at_0, 1e-12);
  EXPECT_NEAR(r.Json()["functionals"]["dyadic_bound"].get<double>(), 3 * std::sqrt(third), 1e-12);
}

TEST(CliTest, PointMassReportsInfinity) {
  const CliRun r = Cli({"evaluate", "--coeffs", "[1]", "--measure", "[1, 0]", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json strong = r.Json()["functionals"]["strong"];
  EXPECT_TRUE(strong["infinite"].get<bool>());
  EXPECT_TRUE(strong["value"].is_null());
  EXPECT_NEAR(strong["sup_over_support"].get<double>(), std::sqrt(1 - std::ldexp(1.0, -32)),
              1e-15);
}

TEST(CliTest, EmptyCoefficientsAreUsageErrors) {
  for (const char* spec : {"[]", R"({"kind":"explicit","values":[]})", ""}) {
    const CliRun r = Cli({"evaluate", "--coeffs", spec});
    EXPECT_EQ(r.code, 2) << spec;
    EXPECT_NE(r.err.find("at least one coefficient required"), std::string::npos) << r.err;
  }
  EXPECT_EQ(Cli({"evaluate", "--coeffs", "0.5,-1"}).code, 2);
  EXPECT_EQ(Cli({"evaluate", "--coeffs", R"({"kind":"power","exponent":1,"count":3,"x":1})"}).code,
            2);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(Cli({}).code, 2);
  EXPECT_EQ(Cli({"frobnicate"}).code, 2);
  EXPECT_EQ(Cli({"evaluate", "--coeffs", "0.5", "--bogus"}).code, 2);
  EXPECT_EQ(Cli({"evaluate", "--coeffs", "0.5", "--depth", "x"}).code, 2);
  EXPECT_EQ(Cli({"evaluate", "--coeffs", "0.5", "--format", "xml"}).code, 2);
  EXPECT_EQ(Cli({"evaluate", "--coeffs", "0.5", "--measure", "[1,2,3]"}).code, 2);
  EXPECT_EQ(Cli({"simulate", "--coeffs", "0.5"}).code, 2);  // seed required
  EXPECT_EQ(Cli({"verify", "--suite", "nope", "--coeffs", "0.5", "--seed", "1"}).code, 2);
  EXPECT_EQ(Cli({"build", "--coeffs", "0.5", "--format", "csv"}).code, 2);
  EXPECT_EQ(Cli({"evaluate", "--coeffs", "0.5", "--functionals", "entropy"}).code, 2);
  EXPECT_EQ(Cli({"--help"}).code, 0);
}

TEST(CliTest, ConfigFile) {
  const std::string good = WriteTemp(
      "good.json", R"({"coeffs": {"kind":"explicit","values":[0.5]}, "timestamp": false,
                       "functionals": ["weak"]})");
  const CliRun r = Cli({"evaluate", "--config", good});
  ASSERT_EQ(r.code, 0) << r.err;
  const json f = r.Json()["functionals"];
  EXPECT_TRUE(f.contains("weak"));
  EXPECT_FALSE(f.contains("strong"));
  EXPECT_FALSE(r.Json().contains("timestamp"));

  const std::string bad = WriteTemp("bad.json", R"({"coeffs": "0.5", "colour": "red"})");
  const CliRun b = Cli({"evaluate", "--config", bad});
  EXPECT_EQ(b.code, 2);
  EXPECT_NE(b.err.find("colour"), std::string::npos);
}

TEST(CliTest, CoefficientAndMeasureFiles) {
  const std::string coeffs = WriteTemp("coeffs.json", kPower63);
  const std::string measure = WriteTemp("measure.json", R"({"weights": [)" + [] {
    std::string s;
    for (int i = 0; i < 64; ++i) s += (i ? "," : "") + std::to_string(i + 1);
    return s;
  }() + "]}");
  const std::string out = TempPath("out.json");
  std::filesystem::remove(out);
  const CliRun r = Cli({"evaluate", "--coeffs", coeffs, "--measure", measure, "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  const json j = json::parse(in);
  EXPECT_TRUE(j.contains("timestamp"));
  EXPECT_EQ(j["measure"]["weights"].size(), 64u);
}

TEST(CliTest, CsvPerLevelTable) {
  const CliRun r = Cli({"classify", "--coeffs", kPower63, "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("k,full_sum,filtered_sum,good_count\n", 0), 0u);
  const CliRun e = Cli({"evaluate", "--coeffs", kPower63, "--format", "csv"});
  EXPECT_EQ(e.out, r.out);
}

TEST(CliTest, BuildExportsPointsAndCells) {
  const CliRun r = Cli({"build", "--coeffs", "0.5,0.5,0.5", "--depth", "1", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.Json();
  EXPECT_EQ(j["index_set"]["points"], json({0.0, 0.25, 0.5, 0.75}));
  EXPECT_EQ(j["partition"]["levels"][1]["nonempty"].size(), 4u);
  EXPECT_EQ(j["partition"]["depth"], 1);
}

TEST(CliTest, OptimizeReportsTrace) {
  const CliRun r = Cli({"optimize", "--coeffs", "0.5", "--seed", "3", "--max-iters", "200",
                     "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.Json();
  EXPECT_NEAR(j["minimize_strong"]["value"].get<double>(), std::sqrt(0.5), 1e-6);
  EXPECT_FALSE(j["minimize_strong"]["trace"].empty());
  EXPECT_TRUE(j["duality_gap"]["weak_below_strong"].get<bool>());
}

TEST(CliTest, SimulateAndAdversarial) {
  const CliRun s = Cli({"simulate", "--coeffs", kPower63, "--seed", "2", "--paths", "5000",
                     "--generator", "rademacher", "--no-timestamp"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_TRUE(s.Json()["chaining"]["pass"].get<bool>());
  EXPECT_TRUE(s.Json()["chaining"]["mc"].contains("stderr"));

  const CliRun a = Cli({"adversarial", "--coeffs", kPower63, "--seed", "2", "--paths", "5000",
                     "--depth", "2", "--no-timestamp"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.Json()["lower_bound"]["base_depth"], 2);
  EXPECT_TRUE(a.Json()["lower_bound"]["pass"].get<bool>());

  const CliRun clipped = Cli({"adversarial", "--coeffs", "0.5", "--seed", "2", "--paths", "1000",
                           "--depth", "9", "--no-timestamp"});
  ASSERT_EQ(clipped.code, 0) << clipped.err;
  EXPECT_EQ(clipped.Json()["warnings"].size(), 1u);
}

TEST(CliTest, VerifySuites) {
  const CliRun sk = Cli({"verify", "--suite", "skeleton", "--coeffs", "0.5"});
  ASSERT_EQ(sk.code, 0) << sk.err;
  EXPECT_EQ(sk.Json()["suites"][0]["checks"].size(), 25u);

  const CliRun ineq = Cli({"verify", "--suite", "inequalities", "--coeffs", kPower63,
                        "--random-measures", "100", "--seed", "7"});
  ASSERT_EQ(ineq.code, 0) << ineq.err;
  EXPECT_TRUE(ineq.Json()["pass"].get<bool>());
  for (const auto& c : ineq.Json()["suites"][0]["checks"]) {
    EXPECT_TRUE(c.contains("measured"));
    EXPECT_TRUE(c.contains("tolerance"));
  }
  EXPECT_EQ(Cli({"verify", "--suite", "lemma4", "--coeffs", "0.5"}).code, 2);
}

TEST(CliTest, PipelineExamples) {
  const CliRun p = Cli({"pipeline", "--coeffs", R"({"kind":"power","exponent":1.0,"count":64})",
                     "--seed", "1", "--paths", "5000", "--max-iters", "300", "--no-timestamp"});
  ASSERT_EQ(p.code, 0) << p.err;
  const json j = p.Json();
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_FALSE(j["functionals"]["strong"]["infinite"].get<bool>());
  EXPECT_TRUE(j["functionals"]["rademacher_menchov"]["total"].is_number());
  EXPECT_FALSE(j["optimizer"]["trace"].empty());
  EXPECT_FALSE(j["functionals"]["per_level_full"].empty());
  EXPECT_TRUE(j["chaining"]["pass"].get<bool>());
  EXPECT_TRUE(j["lower_bound"]["pass"].get<bool>());

  const CliRun heavy = Cli({"pipeline", "--coeffs", R"({"kind":"power","exponent":0.5,"count":64})",
                         "--seed", "1", "--paths", "2000", "--max-iters", "100",
                         "--no-timestamp"});
  ASSERT_EQ(heavy.code, 0) << heavy.err;
  ASSERT_FALSE(heavy.Json()["warnings"].empty());
  EXPECT_NE(heavy.Json()["warnings"][0].get<std::string>().find("tail mass"), std::string::npos);
  EXPECT_TRUE(heavy.Json()["functionals"]["tail_mass_infinite"].get<bool>());

  const CliRun geo = Cli({"pipeline", "--coeffs", R"({"kind":"geometric","ratio":0.5,"count":16})",
                       "--seed", "1", "--paths", "2000", "--max-iters", "100", "--no-timestamp"});
  ASSERT_EQ(geo.code, 0) << geo.err;
  const json f = geo.Json()["functionals"];
  EXPECT_LE(f["good_indices"]["last_good_level"].get<int>(),
            f["separation_depth"].get<int>() + 1);
}

TEST(CliTest, DeterministicWithoutTimestamp) {
  const std::vector<std::string> args = {"pipeline", "--coeffs", "0.3,0.4,0.2,0.5", "--seed", "9",
                                         "--paths", "3000", "--max-iters", "100", "--no-timestamp"};
  auto with_workers = [&](const char* w) {
    auto a = args;
    a.push_back("--workers");
    a.push_back(w);
    return Cli(a).out;
  };
  const std::string one = with_workers("1");
  EXPECT_EQ(one, with_workers("1"));
  EXPECT_EQ(one, with_workers("3"));
}

}  // namespace
}  // namespace orthochain
