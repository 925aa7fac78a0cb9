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

#ifndef FLOWCUT_SIMULATION_H_
#define FLOWCUT_SIMULATION_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "flowcut/congestion.h"
#include "flowcut/metrics.h"
#include "flowcut/routing.h"
#include "flowcut/sim_time.h"
#include "flowcut/topology.h"
#include "flowcut/workload.h"

namespace flowcut {

// Event queue drained while flows are still incomplete.
class DeadlockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A conservation check failed in check mode.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimConfig {
  RoutingPolicy policy = RoutingPolicy::kEcmp;
  // Flowcut decisions at the source NIC; switches run ECMP.
  bool nic_mode = false;
  CongestionParams congestion;
  int64_t mtu = 2048;
  // Per input port, split evenly across the virtual channels.
  int64_t buffer_bytes = 512 * 1024;
  SimTime flowlet_timeout = Micros(2);
  int64_t flowcell_bytes = 64 * 1024;
  // Max receiver out-of-order degree tolerated when resuming early; 0 means
  // sources resume only after a full drain.
  int partial_resume_ood = 0;
  size_t table_capacity = 64 * 1024;
  // < 0: ten times the base RTT; 0: disabled.
  SimTime resume_timeout = -1;
  double xon_loss_probability = 0.0;
  double ack_loss_probability = 0.0;
  uint64_t seed = 1;
  bool check_invariants = false;
  SimTime timeline_bucket = Micros(10);
  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

enum class TraceKind : uint8_t {
  kInject,        // host put a data packet on its link
  kArrive,        // packet fully received at a node
  kDepart,        // node started transmitting the packet
  kDeliver,       // data packet consumed by the destination host
  kFlowcutStart,  // ingress created an entry
  kFlowcutEnd,    // ingress removed an entry
  kXoff,
  kXon,
};

const char* TraceKindName(TraceKind kind);

struct TraceRecord {
  SimTime time = 0;
  TraceKind kind = TraceKind::kArrive;
  PacketType type = PacketType::kData;
  uint32_t flow_id = 0;
  uint64_t key_hash = 0;
  uint32_t psn = 0;
  uint32_t node = 0;
  uint32_t port = 0;
  uint8_t epoch = 0;
  uint32_t flowcut_id = 0;
};

using TraceSink = std::function<void(const TraceRecord&)>;

// "<time_ns> <kind> <type> <flow> <key_hash> <psn> <node> <port> <epoch> <flowcut>"
void WriteTraceLine(std::ostream& out, const TraceRecord& r);

// One packet-level run over a fixed topology and flow set.
class Simulation {
 public:
  Simulation(const Topology& topology, const SimConfig& config,
             std::vector<FlowSpec> flows);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  void set_trace(TraceSink sink);

  // Runs until every flow completes. Throws DeadlockError when progress
  // stops and InvariantError when a check-mode assertion fails.
  RunResult Run();

  // Resume timeout in effect (0 when disabled).
  SimTime resume_timeout() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

// Header bytes added to every data packet under `config`.
int64_t DataHeaderBytes(const SimConfig& config);

}  // namespace flowcut

#endif  // FLOWCUT_SIMULATION_H_
