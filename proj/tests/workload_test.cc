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

#include "flowcut/workload.h"

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flowcut/topology.h"

namespace flowcut {
namespace {

std::string DataFile(const std::string& name) {
  return std::string(FLOWCUT_SOURCE_DIR) + "/data/cdf/" + name + ".cdf";
}

// Mean of a piecewise-linear CDF, read straight from the file: each segment
// contributes its probability mass times its midpoint size.
double OracleMean(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  double prev_s = 0, prev_p = 0, mean = 0;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream f(line);
    double s, p;
    if (!(f >> s >> p)) continue;
    mean += first ? p * s : (p - prev_p) * (s + prev_s) / 2;
    first = false;
    prev_s = s;
    prev_p = p;
  }
  return mean;
}

TEST(SizeDistributionTest, SinglePointAlwaysSameSize) {
  const SizeDistribution d = SizeDistribution::Constant(4096);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(d.Sample(rng), 4096);
}

TEST(SizeDistributionTest, TwoPointQuantileBelowKnee) {
  const SizeDistribution d("two", {{1024, 0.5}, {1 << 20, 1.0}});
  EXPECT_EQ(d.Quantile(0.25), 1024);
  EXPECT_EQ(d.Quantile(0.5), 1024);
  EXPECT_EQ(d.Quantile(0.75), (1024 + (1 << 20)) / 2);
}

TEST(SizeDistributionTest, EmpiricalMeanMatchesAnalytic) {
  for (const char* name : {"uniform", "websearch", "datamining"}) {
    const std::string path = DataFile(name);
    const SizeDistribution d = SizeDistribution::Load(path);
    const double oracle = OracleMean(path);
    EXPECT_NEAR(d.Mean(), oracle, 1e-9 * oracle) << name;
    if (std::string(name) == "datamining") continue;  // tail too heavy for 1e6 draws
    Rng rng(99);
    double sum = 0;
    constexpr int kN = 1'000'000;
    for (int i = 0; i < kN; ++i) {
      const int64_t s = d.Sample(rng);
      ASSERT_GE(s, d.min_size());
      ASSERT_LE(s, d.max_size());
      sum += static_cast<double>(s);
    }
    EXPECT_NEAR(sum / kN, oracle, 0.01 * oracle) << name;
  }
}

TEST(SizeDistributionTest, MalformedInputIsConfigError) {
  std::istringstream decreasing("100 0.5\n50 1.0\n");
  EXPECT_THROW(SizeDistribution::Parse(decreasing, "bad"), ConfigError);
  std::istringstream short_end("100 0.5\n200 0.9\n");
  EXPECT_THROW(SizeDistribution::Parse(short_end, "bad"), ConfigError);
  std::istringstream missing("100\n");
  EXPECT_THROW(SizeDistribution::Parse(missing, "bad"), ConfigError);
  std::istringstream ok("# comment\n100 0.5 # mid\n\n200 1.0\n");
  EXPECT_EQ(SizeDistribution::Parse(ok, "ok").points().size(), 2u);
  EXPECT_THROW(SizeDistribution::Load("/nonexistent.cdf"), ConfigError);
}

TEST(PermutationTest, TwoHostsSwap) {
  Rng rng(1);
  const auto flows = GeneratePermutation(2, 100, rng);
  ASSERT_EQ(flows.size(), 2u);
  EXPECT_EQ(flows[0].dst, 1u);
  EXPECT_EQ(flows[1].dst, 0u);
}

TEST(PermutationTest, DegreeOneNoSelfAndToRExclusion) {
  std::vector<int> tor(128);
  for (int h = 0; h < 128; ++h) tor[h] = h / 8;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const auto flows = GeneratePermutation(128, 8 << 20, rng, tor);
    ASSERT_EQ(flows.size(), 128u);
    std::vector<int> in(128, 0), out(128, 0);
    for (const FlowSpec& f : flows) {
      EXPECT_NE(f.src, f.dst);
      EXPECT_NE(tor[f.src], tor[f.dst]);
      EXPECT_EQ(f.size, 8 << 20);
      ++out[f.src];
      ++in[f.dst];
    }
    for (int h = 0; h < 128; ++h) {
      EXPECT_EQ(in[h], 1);
      EXPECT_EQ(out[h], 1);
    }
  }
}

TEST(PermutationTest, PureFunctionOfSeed) {
  Rng a(5), b(5);
  EXPECT_EQ(GeneratePermutation(64, 1, a), GeneratePermutation(64, 1, b));
}

TEST(AllToAllTest, FourHostsTwelveFlows) {
  const auto flows = GenerateAllToAll(4, 1 << 20);
  EXPECT_EQ(flows.size(), 12u);
  std::set<std::pair<uint32_t, uint32_t>> pairs;
  std::map<uint32_t, int> per_dst;
  for (const FlowSpec& f : flows) {
    EXPECT_NE(f.src, f.dst);
    pairs.insert({f.src, f.dst});
    ++per_dst[f.dst];
  }
  EXPECT_EQ(pairs.size(), 12u);
  for (const auto& [d, n] : per_dst) EXPECT_EQ(n, 3) << d;
}

TEST(AllToAllTest, RotationOrderAndWindow) {
  const uint32_t n = 5;
  const auto flows = GenerateAllToAll(n, 10, 2);
  for (size_t id = 0; id < flows.size(); ++id) {
    const uint32_t k = static_cast<uint32_t>(id / n) + 1;
    const uint32_t i = static_cast<uint32_t>(id % n);
    EXPECT_EQ(flows[id].src, i);
    EXPECT_EQ(flows[id].dst, (i + k) % n);
    if (k <= 2) {
      EXPECT_EQ(flows[id].after, -1);
    } else {
      // Waits for the same source's flow `window` steps earlier.
      ASSERT_GE(flows[id].after, 0);
      EXPECT_EQ(flows[flows[id].after].src, i);
      EXPECT_EQ(flows[flows[id].after].dst, (i + k - 2) % n);
    }
  }
}

TEST(RandomUniformTest, OneFlowPerHost) {
  Rng rng(3);
  const auto flows = GenerateRandomUniform(16, SizeDistribution::Constant(64), 1, rng);
  EXPECT_EQ(flows.size(), 16u);
  for (const FlowSpec& f : flows) {
    EXPECT_NE(f.src, f.dst);
    EXPECT_EQ(f.after, -1);
  }
}

TEST(RandomUniformTest, ClosedLoopChainsPerHost) {
  Rng rng(4);
  const SizeDistribution d = SizeDistribution::Load(DataFile("uniform"));
  const auto flows = GenerateRandomUniform(8, d, 5, rng);
  ASSERT_EQ(flows.size(), 40u);
  for (size_t id = 0; id < flows.size(); ++id) {
    const FlowSpec& f = flows[id];
    EXPECT_NE(f.src, f.dst);
    EXPECT_GE(f.size, d.min_size());
    EXPECT_LE(f.size, d.max_size());
    if (id >= 8) {
      ASSERT_GE(f.after, 0);
      EXPECT_EQ(flows[f.after].src, f.src);
      EXPECT_LT(f.after, static_cast<int32_t>(id));
    }
  }
}

TEST(GeneratorTest, RejectsTooFewHosts) {
  Rng rng(1);
  EXPECT_THROW(GeneratePermutation(1, 1, rng), ConfigError);
  EXPECT_THROW(GenerateAllToAll(1, 1), ConfigError);
  EXPECT_THROW(GenerateRandomUniform(1, SizeDistribution::Constant(1), 1, rng), ConfigError);
}

}  // namespace
}  // namespace flowcut
