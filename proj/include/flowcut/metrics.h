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

#ifndef FLOWCUT_METRICS_H_
#define FLOWCUT_METRICS_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "flowcut/packet.h"
#include "flowcut/sim_time.h"

namespace flowcut {

// Lifecycle of one message, filled in by the simulation.
struct FlowRecord {
  uint32_t flow_id = 0;
  FlowKey key;  // as first injected; NIC mode may rewrite the source port
  uint32_t src = 0;
  uint32_t dst = 0;
  int64_t size = 0;
  SimTime start = -1;
  SimTime end = -1;
  uint32_t packets = 0;     // data packets delivered
  uint32_t ooo = 0;         // expected-PSN mismatches at the receiver
  uint32_t max_ood = 0;     // largest psn - lowest missing psn
  SimTime paused = 0;       // total time spent paused
  uint32_t drains = 0;      // honored pauses
  uint32_t reroutes = 0;    // NIC mode hash rewrites
  uint32_t timeouts = 0;    // self-resumes after a lost XON

  bool completed() const { return end >= 0; }
  SimTime fct() const { return end - start; }
};

struct RunStats {
  SimTime final_time = 0;
  uint64_t events = 0;
  int64_t fabric_data_bytes = 0;  // data bytes sent on switch-to-switch links
  int64_t fabric_ack_bytes = 0;   // switch ACK bytes on the same links
  uint64_t stale_acks = 0;
  uint64_t stale_control = 0;
  uint64_t table_overflows = 0;
  uint64_t xoff_sent = 0;
  uint64_t xon_sent = 0;
  uint64_t xon_lost = 0;
  uint64_t acks_lost = 0;
  uint64_t reroutes = 0;
  uint64_t timeouts = 0;
  uint32_t max_ood = 0;
  SimTime timeline_bucket = Micros(10);
  std::vector<int64_t> timeline;  // payload bytes delivered per bucket
  // Indexed by switch (node id - host count).
  std::vector<uint64_t> max_table_entries;
};

struct RunResult {
  std::vector<FlowRecord> flows;
  RunStats stats;
};

// Nearest-rank percentile: the ceil(q/100 * n)-th smallest value (rank >= 1).
// Throws std::invalid_argument for an empty set or q outside [0, 100].
double Percentile(std::span<const double> values, double q);

// Completed-flow FCTs in nanoseconds.
std::vector<double> FctNanos(std::span<const FlowRecord> flows);
double MeanFctNanos(std::span<const FlowRecord> flows);
double P99FctNanos(std::span<const FlowRecord> flows);
// Mismatched-PSN arrivals over delivered data packets.
double OooFraction(std::span<const FlowRecord> flows);
// Mean over flows of paused time / FCT; 0 when no flow paused.
double DrainingImpact(std::span<const FlowRecord> flows);
int64_t DeliveredBytes(std::span<const FlowRecord> flows);

struct RunReport {
  std::string config_digest;
  uint64_t seed = 0;
  RunResult result;
};

// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string Fnv64Hex(const std::string& text);

// Column order of flows.csv; part of the output contract.
inline constexpr const char* kFlowsCsvHeader =
    "flow_key_hash,src,dst,size,start_ns,end_ns,fct_ns,ooo,paused_ns,drains";

void WriteFlowsCsv(std::ostream& out, std::span<const FlowRecord> flows);
void WriteSummaryJson(std::ostream& out, const RunReport& report);

}  // namespace flowcut

#endif  // FLOWCUT_METRICS_H_
