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

#include "flowcut/simulation.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flowcut/random.h"

namespace flowcut {
namespace {

constexpr int64_t kKiB = 1024;
constexpr int64_t kMiB = 1024 * 1024;

SimConfig Config(RoutingPolicy policy, uint64_t seed = 1) {
  SimConfig c;
  c.policy = policy;
  c.seed = seed;
  c.congestion.picos_per_byte = PicosPerByte(200'000'000'000);
  return c;
}

std::vector<FlowSpec> Incast(uint32_t senders, int64_t size) {
  std::vector<FlowSpec> flows;
  for (uint32_t s = 1; s <= senders; ++s) flows.push_back({s, 0, size, 0, -1});
  return flows;
}

std::vector<FlowSpec> Permutation(uint32_t hosts, int64_t size, uint64_t seed) {
  Rng rng(seed);
  std::vector<int> tor(hosts);
  for (uint32_t h = 0; h < hosts; ++h) tor[h] = static_cast<int>(h / 8);
  return GeneratePermutation(hosts, size, rng, tor);
}

Topology DeskFatTree() { return Topology::FatTree({4, 8, 1, 4, 4, 16}); }

struct Traced {
  RunResult result;
  std::vector<TraceRecord> records;
};

Traced RunTraced(const Topology& t, const SimConfig& c, std::vector<FlowSpec> flows) {
  Traced out;
  Simulation sim(t, c, std::move(flows));
  sim.set_trace([&out](const TraceRecord& r) { out.records.push_back(r); });
  out.result = sim.Run();
  return out;
}

TEST(SimulationTest, EmptyWorkloadEndsAtZero) {
  Simulation sim(Topology::Star(2), Config(RoutingPolicy::kEcmp), {});
  const RunResult r = sim.Run();
  EXPECT_EQ(r.stats.final_time, 0);
  EXPECT_TRUE(r.flows.empty());
}

TEST(SimulationTest, SinglePacketTwoHopTiming) {
  // Host -> switch -> host: two store-and-forward hops of 81.92 + 1000 ns.
  Simulation sim(Topology::Star(2), Config(RoutingPolicy::kEcmp), {{0, 1, 2048, 0, -1}});
  const RunResult r = sim.Run();
  ASSERT_EQ(r.flows.size(), 1u);
  const SimTime hop = SerializationTime(2048, 200'000'000'000) + Micros(1);
  EXPECT_EQ(hop, 1'081'920);
  EXPECT_EQ(r.flows[0].fct(), 2 * hop);
  EXPECT_GE(r.stats.final_time, 2 * hop);
}

TEST(SimulationTest, FlowcutSinglePacketAddsHeaderAndAck) {
  Simulation sim(Topology::Star(2), Config(RoutingPolicy::kFlowcut), {{0, 1, 2048, 0, -1}});
  const RunResult r = sim.Run();
  // Header only exists between switches, so a one-switch path pays nothing.
  EXPECT_EQ(r.flows[0].fct(), 2 * 1'081'920);
  EXPECT_EQ(DataHeaderBytes(Config(RoutingPolicy::kFlowcut)), kFlowcutHeaderBytes);
  EXPECT_EQ(DataHeaderBytes(Config(RoutingPolicy::kEcmp)), 0);
}

TEST(SimulationTest, PacketCountsAndDegenerateSizes) {
  Simulation sim(Topology::Star(4), Config(RoutingPolicy::kEcmp),
                 {{0, 1, 8 * kMiB, 0, -1}, {2, 3, 1, 0, -1}, {3, 2, 0, Nanos(500), -1}});
  const RunResult r = sim.Run();
  EXPECT_EQ(r.flows[0].packets, 4096u);
  EXPECT_EQ(r.flows[1].packets, 1u);
  EXPECT_EQ(r.flows[2].packets, 0u);
  EXPECT_EQ(r.flows[2].fct(), 0);
  EXPECT_EQ(r.flows[2].start, Nanos(500));
  EXPECT_EQ(DeliveredBytes(r.flows), 8 * kMiB + 1);
}

TEST(SimulationTest, SinglePathTopologyNeverReorders) {
  for (RoutingPolicy p : {RoutingPolicy::kEcmp, RoutingPolicy::kSpray, RoutingPolicy::kFlowlet}) {
    Simulation sim(Topology::Star(9), Config(p), Incast(8, 256 * kKiB));
    EXPECT_EQ(OooFraction(sim.Run().flows), 0.0) << PolicyName(p);
  }
}

TEST(SimulationTest, DeterministicForSameSeed) {
  const Topology t = DeskFatTree();
  auto run = [&] {
    Simulation sim(t, Config(RoutingPolicy::kFlowcut, 9), Permutation(128, 128 * kKiB, 3));
    return sim.Run();
  };
  const RunResult a = run(), b = run();
  ASSERT_EQ(a.flows.size(), b.flows.size());
  for (size_t i = 0; i < a.flows.size(); ++i) {
    EXPECT_EQ(a.flows[i].end, b.flows[i].end);
    EXPECT_EQ(a.flows[i].paused, b.flows[i].paused);
  }
  EXPECT_EQ(a.stats.events, b.stats.events);
  EXPECT_EQ(a.stats.timeline, b.stats.timeline);
}

TEST(SimulationTest, SprayReordersOnMultipathFabric) {
  Simulation sim(DeskFatTree(), Config(RoutingPolicy::kSpray), Permutation(128, 128 * kKiB, 1));
  EXPECT_GT(OooFraction(sim.Run().flows), 0.2);
}

// Checks the per-flowcut path properties on a trace: every data packet of a
// flowcut crosses the same switch sequence, and each ACK walks it backwards.
void CheckPaths(const Topology& t, const Traced& run) {
  using PacketId = std::pair<uint32_t, uint32_t>;  // flow, psn
  std::map<PacketId, std::vector<uint32_t>> data_path, ack_path;
  std::map<PacketId, uint32_t> flowcut_of;
  for (const TraceRecord& r : run.records) {
    const PacketId id{r.flow_id, r.psn};
    if (r.kind == TraceKind::kDeliver) flowcut_of[id] = r.flowcut_id;
    if (r.kind != TraceKind::kArrive || t.IsHost(r.node)) continue;
    if (r.type == PacketType::kData) data_path[id].push_back(r.node);
    if (r.type == PacketType::kAck) ack_path[id].push_back(r.node);
  }
  std::map<uint32_t, std::vector<uint32_t>> flowcut_path;
  for (const auto& [id, path] : data_path) {
    const uint32_t fc = flowcut_of.at(id);
    ASSERT_NE(fc, 0u);
    auto [it, fresh] = flowcut_path.emplace(fc, path);
    if (!fresh) ASSERT_EQ(it->second, path) << "flowcut " << fc << " changed path";
  }
  ASSERT_FALSE(ack_path.empty());
  for (const auto& [id, path] : ack_path) {
    const auto& data = data_path.at(id);
    // The egress switch generates the ACK, so it is not an arrival.
    std::vector<uint32_t> want(data.rbegin() + 1, data.rend());
    ASSERT_EQ(path, want);
  }
}

TEST(SimulationTest, FlowcutInOrderSinglePathAndAckSymmetry) {
  const Topology t = InjectFailures(DeskFatTree(), {4, 0.05, 10});
  for (uint64_t seed : {1, 2}) {
    const Traced run = RunTraced(t, Config(RoutingPolicy::kFlowcut, seed),
                                 Permutation(128, 512 * kKiB, seed));
    EXPECT_EQ(OooFraction(run.result.flows), 0.0);
    uint64_t drains = 0;
    for (const FlowRecord& f : run.result.flows) drains += f.drains;
    EXPECT_GT(drains, 0u) << "scenario should exercise draining";
    CheckPaths(t, run);
  }
}

TEST(SimulationTest, FlowcutInOrderOnDragonfly) {
  const Topology t = Topology::Dragonfly({4, 4, 4, 2, 32});
  for (uint64_t seed : {1, 2}) {
    Rng rng(seed);
    const Traced run = RunTraced(t, Config(RoutingPolicy::kFlowcut, seed),
                                 GeneratePermutation(64, 512 * kKiB, rng));
    EXPECT_EQ(OooFraction(run.result.flows), 0.0);
    CheckPaths(t, run);
  }
}

TEST(SimulationTest, PausedFlowInjectsNothing) {
  const Traced run = RunTraced(Topology::Star(9), Config(RoutingPolicy::kFlowcut),
                               Incast(8, 512 * kKiB));
  std::map<uint32_t, bool> paused;
  uint64_t pauses = 0;
  for (const TraceRecord& r : run.records) {
    if (r.kind == TraceKind::kArrive && r.node < 9 && r.type == PacketType::kXoff) {
      paused[r.flow_id] = true;
      ++pauses;
    }
    if (r.kind == TraceKind::kArrive && r.node < 9 && r.type == PacketType::kXon) {
      paused[r.flow_id] = false;
    }
    if (r.kind == TraceKind::kInject) EXPECT_FALSE(paused[r.flow_id]) << r.flow_id;
  }
  EXPECT_GT(pauses, 0u);
  EXPECT_EQ(OooFraction(run.result.flows), 0.0);
}

TEST(SimulationTest, FlowcutTableEntriesBoundedByFlows) {
  Simulation sim(DeskFatTree(), Config(RoutingPolicy::kFlowcut), Permutation(128, 128 * kKiB, 5));
  const RunResult r = sim.Run();
  for (uint64_t n : r.stats.max_table_entries) EXPECT_LE(n, 128u);
}

TEST(SimulationTest, CheckModeHoldsConservation) {
  SimConfig c = Config(RoutingPolicy::kFlowcut);
  c.check_invariants = true;
  Simulation sim(Topology::Star(9), c, Incast(8, 64 * kKiB));
  EXPECT_NO_THROW(sim.Run());
}

TEST(SimulationTest, LostXonWithoutTimeoutDeadlocks) {
  SimConfig c = Config(RoutingPolicy::kFlowcut);
  c.xon_loss_probability = 1.0;
  c.resume_timeout = 0;
  Simulation sim(Topology::Star(9), c, Incast(8, 512 * kKiB));
  EXPECT_THROW(sim.Run(), DeadlockError);

  c.xon_loss_probability = 0.0;
  Simulation control(Topology::Star(9), c, Incast(8, 512 * kKiB));
  const RunResult r = control.Run();
  EXPECT_GT(r.stats.xon_sent, 0u);
  for (const FlowRecord& f : r.flows) EXPECT_TRUE(f.completed());
}

TEST(SimulationTest, LostXonRecoversThroughTimeout) {
  SimConfig c = Config(RoutingPolicy::kFlowcut);
  c.xon_loss_probability = 1.0;
  Simulation sim(Topology::Star(9), c, Incast(8, 512 * kKiB));
  EXPECT_GT(sim.resume_timeout(), 0);
  const RunResult r = sim.Run();
  EXPECT_GT(r.stats.timeouts, 0u);
  for (const FlowRecord& f : r.flows) EXPECT_TRUE(f.completed());
  EXPECT_EQ(OooFraction(r.flows), 0.0);
}

TEST(SimulationTest, NicModeRerouteCountEqualsDrains) {
  const Topology t = InjectFailures(DeskFatTree(), {4, 0.05, 10});
  SimConfig c = Config(RoutingPolicy::kFlowcut, 3);
  c.nic_mode = true;
  Simulation sim(t, c, Permutation(128, 512 * kKiB, 3));
  const RunResult r = sim.Run();
  EXPECT_EQ(OooFraction(r.flows), 0.0);
  uint64_t drains = 0;
  for (const FlowRecord& f : r.flows) {
    EXPECT_EQ(f.reroutes, f.drains);
    drains += f.drains;
  }
  EXPECT_EQ(r.stats.reroutes, drains);
}

TEST(SimulationTest, NicModeIdleNetworkNeverRehashes) {
  SimConfig c = Config(RoutingPolicy::kFlowcut);
  c.nic_mode = true;
  Simulation sim(DeskFatTree(), c, {{0, 100, 256 * kKiB, 0, -1}});
  EXPECT_EQ(sim.Run().stats.reroutes, 0u);
}

TEST(SimulationTest, ConservationOfBytes) {
  Simulation sim(DeskFatTree(), Config(RoutingPolicy::kFlowlet), Permutation(128, 100'000, 2));
  const RunResult r = sim.Run();
  EXPECT_EQ(DeliveredBytes(r.flows), 128 * 100'000);
  int64_t timeline = 0;
  for (int64_t b : r.stats.timeline) timeline += b;
  EXPECT_EQ(timeline, 128 * 100'000);
}

}  // namespace
}  // namespace flowcut
