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

#ifndef FLOWCUT_ROUTING_H_
#define FLOWCUT_ROUTING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "flowcut/packet.h"
#include "flowcut/random.h"
#include "flowcut/sim_time.h"

namespace flowcut {

enum class RoutingPolicy : uint8_t {
  kEcmp,
  kSpray,
  kFlowlet,
  kFlowcell,
  kFlowcut,
  kUgal,
  kValiant,
};

std::string_view PolicyName(RoutingPolicy p);
std::optional<RoutingPolicy> ParsePolicy(std::string_view name);

// Flowlet timeout presets. Each trades FCT for reordering; the values are
// starting points meant to be recalibrated per experiment with `sweep`.
enum class FlowletPreset : uint8_t { kBest, kBalanced, kLowestOoo };
std::string_view FlowletPresetName(FlowletPreset p);
std::optional<FlowletPreset> ParseFlowletPreset(std::string_view name);
SimTime FlowletPresetTimeout(FlowletPreset p);

// Deterministic hash of the flow key into `candidates`, salted per switch so
// consecutive tiers do not polarize.
uint32_t EcmpPick(std::span<const uint32_t> candidates, const FlowKey& key,
                  uint32_t salt);

// Candidate with the fewest queued bytes; ties go to the lowest port id.
uint32_t LeastLoaded(std::span<const uint32_t> candidates,
                     std::span<const int64_t> queue_bytes_by_port);

// Same, but ties are broken uniformly at random.
uint32_t LeastLoaded(std::span<const uint32_t> candidates,
                     std::span<const int64_t> queue_bytes_by_port, Rng& rng);

uint32_t RandomPick(std::span<const uint32_t> candidates, Rng& rng);

// Minimal path unless its queue*hops product exceeds the non-minimal one.
inline bool UgalPrefersMinimal(int64_t q_min, int h_min, int64_t q_nonmin,
                               int h_nonmin) {
  return q_min * h_min <= q_nonmin * h_nonmin;
}

// A flowlet ends when the gap since the previous packet exceeds the timeout.
inline bool FlowletExpired(SimTime last_seen, SimTime now, SimTime timeout) {
  return now - last_seen > timeout;
}

// A flowcell ends once the next packet would overrun the byte budget.
inline bool FlowcellExhausted(int64_t used, int64_t next_size, int64_t budget) {
  return used + next_size > budget;
}

// Stored per-flow routing state for the stateful single-switch selectors.
struct PortMemory {
  bool valid = false;
  uint32_t port = 0;
  SimTime last_seen = 0;
  int64_t bytes = 0;
};

struct SelectionInput {
  RoutingPolicy policy = RoutingPolicy::kEcmp;
  FlowKey key;
  uint32_t psn = 0;
  uint32_t size = 0;
  SimTime now = 0;
  uint32_t salt = 0;
  std::span<const uint32_t> candidates;
  std::span<const int64_t> queue_bytes_by_port;
  SimTime flowlet_timeout = 0;
  int64_t flowcell_bytes = 0;
};

// Single-switch port choice for the policies that need no topology-wide
// view. Flowcut, UGAL and Valiant fall back to least-loaded here; their
// path-level logic lives in the switch datapath. `memory` is read and
// updated for flowlet/flowcell/flowcut.
uint32_t SelectOutputPort(const SelectionInput& in, PortMemory& memory,
                          Rng& rng);

}  // namespace flowcut

#endif  // FLOWCUT_ROUTING_H_
