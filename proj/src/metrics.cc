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

#include "flowcut/metrics.h"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace flowcut {

double Percentile(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of empty set");
  if (!(q >= 0.0 && q <= 100.0)) {
    throw std::invalid_argument("percentile rank must lie in [0, 100]");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  // Nudge down so q*n landing on an integer is not pushed up by rounding.
  size_t rank = static_cast<size_t>(std::ceil(q / 100.0 * n - 1e-9));
  rank = std::clamp<size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::vector<double> FctNanos(std::span<const FlowRecord> flows) {
  std::vector<double> out;
  out.reserve(flows.size());
  for (const FlowRecord& f : flows) {
    if (f.completed()) out.push_back(ToNanos(f.fct()));
  }
  return out;
}

double MeanFctNanos(std::span<const FlowRecord> flows) {
  const std::vector<double> fct = FctNanos(flows);
  if (fct.empty()) return 0.0;
  double sum = 0.0;
  for (double v : fct) sum += v;
  return sum / static_cast<double>(fct.size());
}

double P99FctNanos(std::span<const FlowRecord> flows) {
  const std::vector<double> fct = FctNanos(flows);
  return fct.empty() ? 0.0 : Percentile(fct, 99.0);
}

double OooFraction(std::span<const FlowRecord> flows) {
  uint64_t ooo = 0;
  uint64_t packets = 0;
  for (const FlowRecord& f : flows) {
    ooo += f.ooo;
    packets += f.packets;
  }
  return packets == 0 ? 0.0 : static_cast<double>(ooo) / static_cast<double>(packets);
}

double DrainingImpact(std::span<const FlowRecord> flows) {
  double sum = 0.0;
  size_t n = 0;
  for (const FlowRecord& f : flows) {
    if (!f.completed()) continue;
    ++n;
    if (f.fct() > 0) {
      sum += static_cast<double>(f.paused) / static_cast<double>(f.fct());
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

int64_t DeliveredBytes(std::span<const FlowRecord> flows) {
  int64_t total = 0;
  for (const FlowRecord& f : flows) {
    if (f.completed()) total += f.size;
  }
  return total;
}

std::string Fnv64Hex(const std::string& text) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

void WriteFlowsCsv(std::ostream& out, std::span<const FlowRecord> flows) {
  out << kFlowsCsvHeader << '\n';
  char hash[17];
  for (const FlowRecord& f : flows) {
    std::snprintf(hash, sizeof(hash), "%016" PRIx64, f.key.Hash());
    out << hash << ',' << f.src << ',' << f.dst << ',' << f.size << ','
        << ToWholeNanos(f.start) << ',' << ToWholeNanos(f.end) << ','
        << ToWholeNanos(f.fct()) << ',' << f.ooo << ','
        << ToWholeNanos(f.paused) << ',' << f.drains << '\n';
  }
}

void WriteSummaryJson(std::ostream& out, const RunReport& report) {
  const auto& flows = report.result.flows;
  const RunStats& s = report.result.stats;
  nlohmann::ordered_json j;
  j["config_digest"] = report.config_digest;
  j["seed"] = report.seed;
  size_t completed = 0;
  uint64_t drains = 0;
  for (const FlowRecord& f : flows) {
    completed += f.completed() ? 1 : 0;
    drains += f.drains;
  }
  j["flows"] = flows.size();
  j["completed_flows"] = completed;
  j["final_time_ns"] = ToWholeNanos(s.final_time);
  j["events"] = s.events;
  j["avg_fct_ns"] = MeanFctNanos(flows);
  j["p99_fct_ns"] = P99FctNanos(flows);
  j["ooo_fraction"] = OooFraction(flows);
  j["draining_impact"] = DrainingImpact(flows);
  j["delivered_bytes"] = DeliveredBytes(flows);
  j["drains"] = drains;
  j["reroutes"] = s.reroutes;
  j["timeouts"] = s.timeouts;
  j["max_ood"] = s.max_ood;
  j["fabric_data_bytes"] = s.fabric_data_bytes;
  j["fabric_ack_bytes"] = s.fabric_ack_bytes;
  j["stale_acks"] = s.stale_acks;
  j["stale_control"] = s.stale_control;
  j["table_overflows"] = s.table_overflows;
  j["xoff_sent"] = s.xoff_sent;
  j["xon_sent"] = s.xon_sent;
  j["xon_lost"] = s.xon_lost;
  j["acks_lost"] = s.acks_lost;
  j["max_table_entries"] = s.max_table_entries;
  j["timeline_bucket_ns"] = ToWholeNanos(s.timeline_bucket);
  j["throughput_timeline_bytes"] = s.timeline;
  out << j.dump(2) << '\n';
}

}  // namespace flowcut
