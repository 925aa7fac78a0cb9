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

#include "flowcut/experiment.h"

#include <gtest/gtest.h>
#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace flowcut {
namespace {

constexpr const char* kSmall = R"(
topology:
  kind: fat_tree
  fat_tree: {pods: 2, hosts_per_tor: 4, taper: 1, tors_per_pod: 2, aggs_per_pod: 2, cores: 4}
routing: {policy: flowcut}
workload: {kind: permutation, message_bytes: 32768}
seeds: [1, 2]
)";

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(ExperimentTest, FailureSetDependsOnRunSeed) {
  ExperimentConfig c = ParseConfigText(kSmall);
  c.failures.fraction = 0.25;
  auto degraded = [&](uint64_t seed) {
    std::vector<bool> out;
    for (const LinkSpec& l : BuildTopology(c, seed).links()) out.push_back(l.degraded);
    return out;
  };
  EXPECT_EQ(degraded(1), degraded(1));
  bool any_diff = false;
  for (uint64_t s = 2; s < 10; ++s) any_diff |= degraded(s) != degraded(1);
  EXPECT_TRUE(any_diff);
}

TEST(ExperimentTest, WorkloadIsPureFunctionOfSeed) {
  const ExperimentConfig c = ParseConfigText(kSmall);
  const Topology t = BuildTopology(c, 1);
  EXPECT_EQ(BuildWorkload(c, t, 1), BuildWorkload(c, t, 1));
  for (const FlowSpec& f : BuildWorkload(c, t, 1)) EXPECT_NE(t.HostTor(f.src), t.HostTor(f.dst));
}

TEST(ExperimentTest, ExplicitFlowsAreValidated) {
  ExperimentConfig c = ParseConfigText("topology: {kind: star, star: {hosts: 2}}\n"
                                       "workload: {kind: explicit, flows: [{src: 0, dst: 2, size: 1}]}");
  EXPECT_THROW(BuildWorkload(c, BuildTopology(c, 1), 1), ConfigError);
  c.workload.flows = {{0, 1, 1, 0, 0}};
  EXPECT_THROW(BuildWorkload(c, BuildTopology(c, 1), 1), ConfigError);
}

TEST(ExperimentTest, RunOutputsAreByteIdentical) {
  const ExperimentConfig c = ParseConfigText(kSmall);
  const auto dir = std::filesystem::temp_directory_path() / "flowcut_experiment_test";
  std::filesystem::remove_all(dir);
  WriteRunOutputs((dir / "a").string(), RunOnce(c, 1));
  WriteRunOutputs((dir / "b").string(), RunOnce(c, 1));
  const std::string flows = Slurp(dir / "a" / "flows.csv");
  EXPECT_EQ(flows, Slurp(dir / "b" / "flows.csv"));
  EXPECT_EQ(Slurp(dir / "a" / "summary.json"), Slurp(dir / "b" / "summary.json"));
  EXPECT_EQ(flows.substr(0, flows.find('\n')), kFlowsCsvHeader);
  EXPECT_EQ(std::count(flows.begin(), flows.end(), '\n'), 1 + 16);
  std::filesystem::remove_all(dir);
}

TEST(ExperimentTest, DigestTracksConfigContent) {
  ExperimentConfig a = ParseConfigText(kSmall);
  ExperimentConfig b = a;
  EXPECT_EQ(ConfigDigest(a), ConfigDigest(b));
  EXPECT_EQ(ConfigDigest(a).size(), 16u);
  b.output = "elsewhere";
  b.seeds = {42};
  EXPECT_EQ(ConfigDigest(a), ConfigDigest(b));
  b.sim.congestion.alpha = 0.5;
  EXPECT_NE(ConfigDigest(a), ConfigDigest(b));
}

TEST(ExperimentTest, SeedOutputDir) {
  EXPECT_EQ(std::filesystem::path(SeedOutputDir("out", 7)), std::filesystem::path("out/seed-7"));
}

TEST(SweepTest, ParseAxis) {
  const SweepAxis a = ParseSweepAxis("routing.alpha=0.25,0.5");
  EXPECT_EQ(a.path, "routing.alpha");
  EXPECT_EQ(a.values, (std::vector<std::string>{"0.25", "0.5"}));
  EXPECT_THROW(ParseSweepAxis("routing.alpha"), ConfigError);
  EXPECT_THROW(ParseSweepAxis("=1"), ConfigError);
  EXPECT_THROW(ParseSweepAxis("a=1,,2"), ConfigError);
}

TEST(SweepTest, HeatmapGridHasTwentyCellsLastAxisFastest) {
  const YAML::Node base = YAML::Load(kSmall);
  const SweepPlan plan =
      PlanSweep(base, ".", {ParseSweepAxis("routing.rtt_ratio_threshold=1,2,3,4,5"),
                            ParseSweepAxis("routing.alpha=0.25,0.5,0.75,0.9")});
  ASSERT_EQ(plan.cells.size(), 20u);
  EXPECT_DOUBLE_EQ(plan.cells[0].sim.congestion.rtt_ratio_threshold, 1);
  EXPECT_DOUBLE_EQ(plan.cells[0].sim.congestion.alpha, 0.25);
  EXPECT_DOUBLE_EQ(plan.cells[1].sim.congestion.alpha, 0.5);
  EXPECT_DOUBLE_EQ(plan.cells[4].sim.congestion.rtt_ratio_threshold, 2);
  EXPECT_DOUBLE_EQ(plan.cells[19].sim.congestion.rtt_ratio_threshold, 5);
  EXPECT_DOUBLE_EQ(plan.cells[19].sim.congestion.alpha, 0.9);
  EXPECT_EQ(plan.cell_values[6], (std::vector<std::string>{"2", "0.75"}));
}

TEST(SweepTest, InvalidCellFailsBeforeRunning) {
  const YAML::Node base = YAML::Load(kSmall);
  EXPECT_THROW(PlanSweep(base, ".", {ParseSweepAxis("routing.alpha=0.5,7")}), ConfigError);
}

TEST(SweepTest, RunsAreOrderedAndMatchSingleRuns) {
  const YAML::Node base = YAML::Load(kSmall);
  const SweepPlan plan = PlanSweep(base, ".", {ParseSweepAxis("routing.policy=ecmp,flowcut")});
  const std::vector<SweepRow> rows = RunSweep(plan, 3);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].axis_values[0], "ecmp");
  EXPECT_EQ(rows[0].seed, 1u);
  EXPECT_EQ(rows[1].seed, 2u);
  EXPECT_EQ(rows[3].axis_values[0], "flowcut");
  const RunReport single = RunOnce(plan.cells[1], 2);
  EXPECT_DOUBLE_EQ(rows[3].p99_fct_ns, P99FctNanos(single.result.flows));
  EXPECT_EQ(rows[0].ooo_fraction, 0.0);

  std::ostringstream out;
  WriteSweepCsv(out, plan.axes, rows);
  const std::string csv = out.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "routing.policy,seed,avg_fct_ns,p99_fct_ns,ooo_fraction,draining_impact,drains,"
            "max_table_entries");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

}  // namespace
}  // namespace flowcut
