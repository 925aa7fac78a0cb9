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

#ifndef FLOWCUT_FLOWCUT_TABLE_H_
#define FLOWCUT_FLOWCUT_TABLE_H_

#include <cstddef>
#include <cstdint>
#include <unordered_map>

#include "flowcut/congestion.h"
#include "flowcut/packet.h"

namespace flowcut {

enum class DrainState : uint8_t {
  kActive,
  kDraining,               // XOFF sent, waiting for in-flight bytes to reach 0
  kDrainedAwaitingResume,  // partial resume: XON sent while packets remain
};

struct FlowcutEntry {
  uint32_t out_port = 0;
  uint32_t in_port = 0;  // reverse path for ACKs
  int64_t inflight_bytes = 0;
  int32_t inflight_packets = 0;
  int16_t via_group = -1;
  DrainState drain_state = DrainState::kActive;
  RttState rtt;  // only maintained at the ingress switch
};

// Footprint of one entry in the analytic memory model: in/out port (2 B),
// in-flight counter (3 B), RTT average (2 B), last RTT + delta average (4 B).
inline constexpr int64_t kFlowcutBytesPerFlow = 11;
inline constexpr int64_t kFlowletBytesPerFlow = 5;
inline constexpr int64_t kFlowcellBytesPerFlow = 2;

struct TableKey {
  FlowKey key;
  uint8_t epoch = 0;
  friend bool operator==(const TableKey&, const TableKey&) = default;
};

struct TableKeyHasher {
  size_t operator()(const TableKey& k) const {
    return static_cast<size_t>(k.key.Hash() ^ (static_cast<uint64_t>(k.epoch) << 63));
  }
};

// Per-switch flowcut table. An entry lives while its flowcut has bytes in
// flight downstream of this switch (or while a drain is pending).
class FlowcutTable {
 public:
  explicit FlowcutTable(size_t capacity) : capacity_(capacity) {}

  FlowcutEntry* Find(const TableKey& k) {
    auto it = entries_.find(k);
    return it == entries_.end() ? nullptr : &it->second;
  }
  const FlowcutEntry* Find(const TableKey& k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? nullptr : &it->second;
  }

  // Returns nullptr when the table is full.
  FlowcutEntry* Insert(const TableKey& k, const FlowcutEntry& e) {
    if (entries_.size() >= capacity_) return nullptr;
    auto [it, inserted] = entries_.emplace(k, e);
    if (entries_.size() > max_size_) max_size_ = entries_.size();
    return &it->second;
  }

  void Erase(const TableKey& k) { entries_.erase(k); }

  size_t size() const { return entries_.size(); }
  size_t max_size() const { return max_size_; }
  size_t capacity() const { return capacity_; }
  const std::unordered_map<TableKey, FlowcutEntry, TableKeyHasher>& entries() const {
    return entries_;
  }

 private:
  size_t capacity_;
  size_t max_size_ = 0;
  std::unordered_map<TableKey, FlowcutEntry, TableKeyHasher> entries_;
};

}  // namespace flowcut

#endif  // FLOWCUT_FLOWCUT_TABLE_H_
