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

#ifndef FLOWCUT_ANALYTICS_H_
#define FLOWCUT_ANALYTICS_H_

#include <cstdint>
#include <ostream>
#include <span>

#include "flowcut/routing.h"

namespace flowcut {

// Units are explicit: B in bits per second, l in seconds, M in bytes.
struct ResourceModelInputs {
  double hosts = 1024;            // H
  double flows_per_host = 1;      // f
  double bits_per_second = 200e9; // B
  double latency_s = 5e-6;        // l, one-way packet latency
  double mtu_bytes = 2048;        // M
  double per_flow_bytes = 11;     // switch state per active flow
};

// Throws ConfigError when a field is out of range (l may be 0).
void ValidateModelInputs(const ResourceModelInputs& in);

// MTU packets one host link keeps in flight: B*l / (8*M).
double InflightPacketsPerHost(const ResourceModelInputs& in);

// Active flows network-wide. Every flow stays active while each carries at
// least one packet in flight; past that point the count saturates at the
// packets in flight per host.
double ActiveFlows(const ResourceModelInputs& in);

// Worst case table bytes at one switch that sees every active flow.
double MemoryOccupancy(const ResourceModelInputs& in);

// ACK bytes per data byte for MTU-sized packets.
double AckOverhead(double mtu_bytes);

// Per-flow switch state in bytes, or 0 for stateless policies.
int64_t PerFlowStateBytes(RoutingPolicy policy);

inline constexpr const char* kModelCsvHeader =
    "hosts,flows_per_host,bits_per_second,latency_s,mtu_bytes,per_flow_bytes,"
    "active_flows,memory_bytes,ack_overhead";

void WriteModelCsv(std::ostream& out, std::span<const ResourceModelInputs> rows);

}  // namespace flowcut

#endif  // FLOWCUT_ANALYTICS_H_
