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

#ifndef FLOWCUT_PACKET_H_
#define FLOWCUT_PACKET_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>

#include "flowcut/sim_time.h"

namespace flowcut {

// Switch-to-switch ACK: preamble byte + 13 B key + size + timestamp + hops.
inline constexpr int64_t kAckWireBytes = 20;
// XOFF/XON frames are sent at ACK priority with the same footprint.
inline constexpr int64_t kControlWireBytes = 20;
// NIC-level ACKs carry Ethernet and IP headers.
inline constexpr int64_t kNicAckWireBytes = 64;
// Timestamp (2 B) plus hop count and reserved bits (1 B) added to data
// packets when switches run flowcut.
inline constexpr int64_t kFlowcutHeaderBytes = 3;
inline constexpr int kMaxHopCount = 15;

// Five-tuple flow identifier with a 13-byte canonical encoding.
struct FlowKey {
  uint32_t src_addr = 0;
  uint32_t dst_addr = 0;
  uint16_t src_port = 0;
  uint16_t dst_port = 0;
  uint8_t protocol = 0;

  std::array<uint8_t, 13> Encode() const;
  static FlowKey Decode(const std::array<uint8_t, 13>& bytes);
  uint64_t Hash() const;  // FNV-1a over the canonical encoding
  FlowKey Reversed() const;

  friend bool operator==(const FlowKey&, const FlowKey&) = default;
};

struct FlowKeyHasher {
  size_t operator()(const FlowKey& k) const { return k.Hash(); }
};

enum class PacketType : uint8_t { kData, kAck, kXoff, kXon, kNicAck };

inline bool IsControl(PacketType t) { return t != PacketType::kData; }

struct Packet {
  PacketType type = PacketType::kData;
  FlowKey key;
  uint32_t flow_id = 0;
  uint32_t psn = 0;
  uint32_t size = 0;  // wire bytes
  uint32_t payload = 0;
  SimTime ingress_timestamp = 0;  // switch mode: stamped at ingress switch
  SimTime nic_timestamp = 0;      // NIC mode: stamped by the source NIC
  uint8_t hop_count = 0;
  uint8_t epoch = 0;  // flowcut generation bit (reserved header bits)
  bool last_of_flow = false;
  int16_t via_group = -1;  // Dragonfly non-minimal intermediate group
  bool via_reached = false;
  // First packet of a new flowcut: downstream switches choose afresh.
  bool flowcut_start = false;

  // ACK fields, copied verbatim from the data packet at the egress switch.
  uint32_t acked_bytes = 0;
  SimTime echoed_timestamp = 0;
  uint8_t echoed_hop_count = 0;

  // Location bookkeeping for invariant checks and credit return.
  uint32_t node = 0;        // node currently holding the packet
  int32_t in_port = -1;     // port it arrived on at `node`
  int8_t vc = 0;            // virtual channel it arrived on
  bool on_wire = false;
  uint32_t wire_link = 0;   // link index while on_wire
  uint32_t dst_host = 0;
  uint32_t src_host = 0;
  // Simulator bookkeeping, not on the wire.
  bool untracked = false;       // ingress table overflow: plain ECMP, no ACKs
  bool passed_ingress = false;  // counted in the ingress in-flight total
  bool acked = false;           // egress already emitted its ACK
  uint32_t flowcut_id = 0;      // 0 = none; unique per ingress flowcut
};

Packet MakeAck(const Packet& data);

}  // namespace flowcut

#endif  // FLOWCUT_PACKET_H_
