// Copyright 2026 The aquo Authors
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

// End-to-end runs of the command-line tool.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "aquo/io.hpp"

namespace aquo {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(AQUO_CLI_PATH) + " " + args + " 2>&1";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const fs::path dir = fs::temp_directory_path() / (std::string("aquo_cli_") + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::string* header) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, *header);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

TEST(Cli, SynthRunAndCheck) {
  const fs::path dir = scratch_dir();
  const CliResult r = run_cli("synth --out " + (dir / "run").string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir / "run" / "plan.json"));
  const CliResult c = run_cli("--check " + (dir / "run").string());
  EXPECT_EQ(c.code, 0) << c.out;
  EXPECT_NE(c.out.find("\"ok\": true"), std::string::npos);
  std::ofstream(dir / "run" / "report.json", std::ios::app) << "x";
  const CliResult bad = run_cli("--check " + (dir / "run").string());
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("\"ok\": false"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, ZenoRepeatsAreByteIdentical) {
  const fs::path dir = scratch_dir();
  const std::string common = "zeno --seed 11 --set ensemble=200 --set t_max_us=20 --set snapshots_us=[10] --out ";
  ASSERT_EQ(run_cli(common + (dir / "a").string()).code, 0);
  ASSERT_EQ(run_cli(common + (dir / "b").string()).code, 0);
  EXPECT_EQ(slurp(dir / "a" / "zeno.csv"), slurp(dir / "b" / "zeno.csv"));
  std::string header;
  const auto rows = read_csv(dir / "a" / "zeno.csv", &header);
  EXPECT_EQ(header, "t_us,p0,p1,p2,p3,p4,p5,p_rest");
  ASSERT_FALSE(rows.empty());
  for (const auto& row : rows) {
    double sum = 0.0;
    for (std::size_t k = 1; k < row.size(); ++k) sum += row[k];
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
  fs::remove_all(dir);
}

TEST(Cli, ConfigFileAndSeedOverride) {
  const fs::path dir = scratch_dir();
  write_json_file(dir / "cfg.json", Json{{"shots", 1000}, {"seed", 3}});
  ASSERT_EQ(run_cli("coherence --config " + (dir / "cfg.json").string() + " --out " + (dir / "a").string()).code, 0);
  ASSERT_EQ(run_cli("coherence --config " + (dir / "cfg.json").string() + " --seed 3 --out " + (dir / "b").string())
                .code,
            0);
  EXPECT_EQ(read_json_file(dir / "a" / "manifest.json").at("seed"), 3);
  EXPECT_EQ(slurp(dir / "a" / "report.json"), slurp(dir / "b" / "report.json"));
  fs::remove_all(dir);
}

TEST(Cli, DefaultsPrintsParameters) {
  const CliResult r = run_cli("stabilize --defaults");
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_DOUBLE_EQ(j.at("t_int_us").get<double>(), 12.5);
}

TEST(Cli, UsageErrorsExitTwo) {
  const fs::path dir = scratch_dir();
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("plot --out " + dir.string()).code, 2);
  EXPECT_EQ(run_cli("synth").code, 2);
  const CliResult r = run_cli("synth --set bogus=1 --out " + (dir / "x").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("ConfigError"), std::string::npos);
  EXPECT_EQ(run_cli("synth --config " + (dir / "missing.json").string() + " --out " + (dir / "y").string()).code, 2);
  fs::remove_all(dir);
}

TEST(Cli, NumericalFailureExitsThree) {
  const fs::path dir = scratch_dir();
  const CliResult r = run_cli("stabilize --set exact=true --set t_max_us=25 --out " + (dir / "x").string());
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_NE(r.out.find("FitFailed"), std::string::npos);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace aquo
