// Copyright 2026 The Flowcut Simulator Authors
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

// Runs the flowcut_sim binary end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

const std::string kBinary = FLOWCUT_SIM_BINARY;
const std::string kSource = FLOWCUT_SOURCE_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("flowcut_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Run(const std::string& args) {
    const std::string cmd = kBinary + " " + args + " >" + (dir_ / "stdout").string() + " 2>" +
                            (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string Write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string Slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, MinimalRunWritesOneFlow) {
  const fs::path out = dir_ / "out";
  ASSERT_EQ(Run("run " + kSource + "/configs/minimal.yaml --out " + out.string()), 0)
      << Slurp(dir_ / "stderr");
  const std::string csv = Slurp(out / "seed-1" / "flows.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  const auto summary = nlohmann::json::parse(Slurp(out / "seed-1" / "summary.json"));
  EXPECT_EQ(summary["flows"], 1);
  EXPECT_EQ(summary["completed_flows"], 1);
  // 1 KiB over two 200 Gb/s, 1 us hops: 2 * (40.96 + 1000) ns.
  EXPECT_DOUBLE_EQ(summary["avg_fct_ns"].get<double>(), 2081.92);
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  const std::string cfg = kSource + "/configs/permutation_flowcut.yaml";
  ASSERT_EQ(Run("run " + cfg + " --seed 2 --out " + (dir_ / "a").string()), 0);
  ASSERT_EQ(Run("run " + cfg + " --seed 2 --out " + (dir_ / "b").string()), 0);
  for (const char* f : {"flows.csv", "summary.json"}) {
    EXPECT_EQ(Slurp(dir_ / "a" / "seed-2" / f), Slurp(dir_ / "b" / "seed-2" / f)) << f;
  }
}

TEST_F(CliTest, TraceFileHasOneLinePerHopEvent) {
  const fs::path out = dir_ / "out";
  ASSERT_EQ(Run("run " + kSource + "/configs/minimal.yaml --trace --out " + out.string()), 0);
  std::istringstream trace(Slurp(out / "seed-1" / "trace.txt"));
  std::string line;
  int lines = 0;
  while (std::getline(trace, line)) {
    std::istringstream f(line);
    std::string field;
    int fields = 0;
    while (f >> field) ++fields;
    EXPECT_EQ(fields, 10) << line;
    ++lines;
  }
  EXPECT_GE(lines, 4);  // inject, arrive, depart, arrive/deliver
}

TEST_F(CliTest, ConfigErrorExitsOneWithoutOutput) {
  const std::string cfg = Write("bad.yaml", "routing: {alpah: 0.5}\noutput: " +
                                                (dir_ / "out").string() + "\n");
  EXPECT_EQ(Run("run " + cfg), 1);
  EXPECT_NE(Slurp(dir_ / "stderr").find("routing.alpah"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
  EXPECT_EQ(Run("run " + (dir_ / "missing.yaml").string()), 1);
  EXPECT_EQ(Run("frobnicate"), 1);
}

TEST_F(CliTest, DeadlockExitsTwo) {
  const std::string cfg = Write("deadlock.yaml", R"(
topology: {kind: star, star: {hosts: 9}}
routing: {policy: flowcut, xon_loss_probability: 1.0, resume_timeout: none}
workload:
  kind: explicit
  flows:
    - {src: 1, dst: 0, size: 524288}
    - {src: 2, dst: 0, size: 524288}
    - {src: 3, dst: 0, size: 524288}
    - {src: 4, dst: 0, size: 524288}
    - {src: 5, dst: 0, size: 524288}
    - {src: 6, dst: 0, size: 524288}
    - {src: 7, dst: 0, size: 524288}
    - {src: 8, dst: 0, size: 524288}
)");
  EXPECT_EQ(Run("run " + cfg + " --out " + (dir_ / "out").string()), 2);
  EXPECT_NE(Slurp(dir_ / "stderr").find("deadlock"), std::string::npos);
}

TEST_F(CliTest, ModelAckOverhead) {
  ASSERT_EQ(Run("model ack-overhead --mtu 1024,2048,20"), 0);
  EXPECT_EQ(Slurp(dir_ / "stdout"), "mtu_bytes,ack_overhead\n1024,0.0195312\n2048,0.00976562\n20,1\n");
}

TEST_F(CliTest, ModelMemoryCsv) {
  const fs::path csv = dir_ / "model.csv";
  ASSERT_EQ(Run("model memory --flows-per-host 1,10000 --latency-us 50 --out " + csv.string()), 0);
  std::istringstream in(Slurp(csv));
  std::string header, a, b;
  std::getline(in, header);
  std::getline(in, a);
  std::getline(in, b);
  EXPECT_EQ(header.substr(0, 6), "hosts,");
  EXPECT_NE(b.find(",6875000,"), std::string::npos) << b;  // 1024 * 610.35 * 11
  EXPECT_EQ(Run("model memory --hosts 0"), 1);
}

TEST_F(CliTest, SweepWritesCsv) {
  const std::string cfg = Write("base.yaml", R"(
topology:
  kind: fat_tree
  fat_tree: {pods: 2, hosts_per_tor: 4, taper: 1, tors_per_pod: 2, aggs_per_pod: 2, cores: 4}
routing: {policy: flowcut}
workload: {kind: permutation, message_bytes: 16384}
)");
  ASSERT_EQ(Run("sweep " + cfg + " --axis routing.alpha=0.5,0.9 --axis routing.rtt_ratio_threshold=2,4 "
                "--jobs 2 --out " + (dir_ / "sw").string()),
            0)
      << Slurp(dir_ / "stderr");
  const std::string csv = Slurp(dir_ / "sw" / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(csv.rfind("routing.alpha,routing.rtt_ratio_threshold,seed,", 0), 0u);
  EXPECT_EQ(Run("sweep " + cfg + " --axis routing.alpha=5"), 1);
}

TEST_F(CliTest, ExportTopologyEdgeList) {
  const fs::path out = dir_ / "edges.txt";
  ASSERT_EQ(Run("export-topology " + kSource + "/configs/minimal.yaml --out " + out.string()), 0);
  const std::string text = Slurp(out);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);  // comment + 2 links
}

}  // namespace
