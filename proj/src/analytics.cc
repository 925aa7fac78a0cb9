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

#include "flowcut/analytics.h"

#include <cmath>
#include <stdexcept>

#include "flowcut/flowcut_table.h"
#include "flowcut/packet.h"
#include "flowcut/topology.h"

namespace flowcut {

void ValidateModelInputs(const ResourceModelInputs& in) {
  if (!(in.hosts > 0)) throw ConfigError("model: hosts must be > 0");
  if (!(in.flows_per_host > 0)) throw ConfigError("model: flows_per_host must be > 0");
  if (!(in.bits_per_second > 0)) throw ConfigError("model: bits_per_second must be > 0");
  if (!(in.latency_s >= 0)) throw ConfigError("model: latency must be >= 0");
  if (!(in.mtu_bytes > 0)) throw ConfigError("model: mtu must be > 0");
  if (!(in.per_flow_bytes >= 0)) throw ConfigError("model: per_flow_bytes must be >= 0");
}

double InflightPacketsPerHost(const ResourceModelInputs& in) {
  return in.bits_per_second * in.latency_s / (8.0 * in.mtu_bytes);
}

double ActiveFlows(const ResourceModelInputs& in) {
  ValidateModelInputs(in);
  const double per_host = InflightPacketsPerHost(in);
  if (per_host / in.flows_per_host >= 1.0) return in.hosts * in.flows_per_host;
  return in.hosts * per_host;
}

double MemoryOccupancy(const ResourceModelInputs& in) {
  return ActiveFlows(in) * in.per_flow_bytes;
}

double AckOverhead(double mtu_bytes) {
  if (!(mtu_bytes > 0)) throw ConfigError("model: mtu must be > 0");
  return static_cast<double>(kAckWireBytes) / mtu_bytes;
}

int64_t PerFlowStateBytes(RoutingPolicy policy) {
  switch (policy) {
    case RoutingPolicy::kFlowcut: return kFlowcutBytesPerFlow;
    case RoutingPolicy::kFlowlet: return kFlowletBytesPerFlow;
    case RoutingPolicy::kFlowcell: return kFlowcellBytesPerFlow;
    default: return 0;
  }
}

void WriteModelCsv(std::ostream& out, std::span<const ResourceModelInputs> rows) {
  out << kModelCsvHeader << '\n';
  const auto old_precision = out.precision(12);
  for (const ResourceModelInputs& r : rows) {
    out << r.hosts << ',' << r.flows_per_host << ',' << r.bits_per_second << ','
        << r.latency_s << ',' << r.mtu_bytes << ',' << r.per_flow_bytes << ','
        << ActiveFlows(r) << ',' << MemoryOccupancy(r) << ','
        << AckOverhead(r.mtu_bytes) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace flowcut
