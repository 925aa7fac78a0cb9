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

#include "flowcut/routing.h"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace flowcut {

namespace {

struct PolicyNameEntry {
  RoutingPolicy policy;
  std::string_view name;
};

constexpr std::array<PolicyNameEntry, 7> kPolicyNames = {{
    {RoutingPolicy::kEcmp, "ecmp"},
    {RoutingPolicy::kSpray, "spray"},
    {RoutingPolicy::kFlowlet, "flowlet"},
    {RoutingPolicy::kFlowcell, "flowcell"},
    {RoutingPolicy::kFlowcut, "flowcut"},
    {RoutingPolicy::kUgal, "ugal"},
    {RoutingPolicy::kValiant, "valiant"},
}};

}  // namespace

std::string_view PolicyName(RoutingPolicy p) {
  for (const auto& e : kPolicyNames) {
    if (e.policy == p) return e.name;
  }
  return "?";
}

std::optional<RoutingPolicy> ParsePolicy(std::string_view name) {
  for (const auto& e : kPolicyNames) {
    if (e.name == name) return e.policy;
  }
  return std::nullopt;
}

std::string_view FlowletPresetName(FlowletPreset p) {
  switch (p) {
    case FlowletPreset::kBest: return "best";
    case FlowletPreset::kBalanced: return "balanced";
    case FlowletPreset::kLowestOoo: return "lowest_ooo";
  }
  return "?";
}

std::optional<FlowletPreset> ParseFlowletPreset(std::string_view name) {
  if (name == "best") return FlowletPreset::kBest;
  if (name == "balanced") return FlowletPreset::kBalanced;
  if (name == "lowest_ooo") return FlowletPreset::kLowestOoo;
  return std::nullopt;
}

SimTime FlowletPresetTimeout(FlowletPreset p) {
  switch (p) {
    case FlowletPreset::kBest: return Nanos(500);
    case FlowletPreset::kBalanced: return Micros(2);
    case FlowletPreset::kLowestOoo: return Micros(8);
  }
  return Micros(2);
}

uint32_t EcmpPick(std::span<const uint32_t> candidates, const FlowKey& key,
                  uint32_t salt) {
  if (candidates.empty()) throw std::logic_error("no candidate ports");
  const uint64_t h = Mix64(key.Hash() ^ (static_cast<uint64_t>(salt) * 0x9e3779b97f4a7c15ULL));
  return candidates[h % candidates.size()];
}

uint32_t LeastLoaded(std::span<const uint32_t> candidates,
                     std::span<const int64_t> queue_bytes_by_port) {
  if (candidates.empty()) throw std::logic_error("no candidate ports");
  uint32_t best = candidates[0];
  for (uint32_t p : candidates.subspan(1)) {
    const int64_t q = queue_bytes_by_port[p];
    const int64_t qb = queue_bytes_by_port[best];
    if (q < qb || (q == qb && p < best)) best = p;
  }
  return best;
}

uint32_t LeastLoaded(std::span<const uint32_t> candidates,
                     std::span<const int64_t> queue_bytes_by_port, Rng& rng) {
  if (candidates.empty()) throw std::logic_error("no candidate ports");
  uint32_t best = candidates[0];
  uint64_t ties = 1;
  for (uint32_t p : candidates.subspan(1)) {
    const int64_t q = queue_bytes_by_port[p];
    const int64_t qb = queue_bytes_by_port[best];
    if (q < qb) {
      best = p;
      ties = 1;
    } else if (q == qb && rng.UniformInt(++ties) == 0) {
      best = p;
    }
  }
  return best;
}

uint32_t RandomPick(std::span<const uint32_t> candidates, Rng& rng) {
  if (candidates.empty()) throw std::logic_error("no candidate ports");
  return candidates[rng.UniformInt(candidates.size())];
}

uint32_t SelectOutputPort(const SelectionInput& in, PortMemory& memory,
                          Rng& rng) {
  auto still_valid = [&](uint32_t port) {
    return std::find(in.candidates.begin(), in.candidates.end(), port) !=
           in.candidates.end();
  };
  switch (in.policy) {
    case RoutingPolicy::kEcmp:
      return EcmpPick(in.candidates, in.key, in.salt);
    case RoutingPolicy::kSpray:
    case RoutingPolicy::kValiant:
      return RandomPick(in.candidates, rng);
    case RoutingPolicy::kFlowlet: {
      if (!memory.valid || !still_valid(memory.port) ||
          FlowletExpired(memory.last_seen, in.now, in.flowlet_timeout)) {
        memory.port = LeastLoaded(in.candidates, in.queue_bytes_by_port, rng);
        memory.valid = true;
      }
      memory.last_seen = in.now;
      return memory.port;
    }
    case RoutingPolicy::kFlowcell: {
      if (!memory.valid || !still_valid(memory.port) ||
          FlowcellExhausted(memory.bytes, in.size, in.flowcell_bytes)) {
        memory.port = LeastLoaded(in.candidates, in.queue_bytes_by_port, rng);
        memory.valid = true;
        memory.bytes = 0;
      }
      memory.bytes += in.size;
      return memory.port;
    }
    case RoutingPolicy::kFlowcut: {
      // The caller clears `memory` when the flow's in-flight count hits 0.
      if (!memory.valid || !still_valid(memory.port)) {
        memory.port = LeastLoaded(in.candidates, in.queue_bytes_by_port, rng);
        memory.valid = true;
      }
      return memory.port;
    }
    case RoutingPolicy::kUgal:
      return LeastLoaded(in.candidates, in.queue_bytes_by_port, rng);
  }
  return in.candidates[0];
}

}  // namespace flowcut
