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

#include "flowcut/packet.h"

namespace flowcut {

std::array<uint8_t, 13> FlowKey::Encode() const {
  std::array<uint8_t, 13> out{};
  for (int i = 0; i < 4; ++i) {
    out[i] = static_cast<uint8_t>(src_addr >> (24 - 8 * i));
    out[4 + i] = static_cast<uint8_t>(dst_addr >> (24 - 8 * i));
  }
  out[8] = static_cast<uint8_t>(src_port >> 8);
  out[9] = static_cast<uint8_t>(src_port);
  out[10] = static_cast<uint8_t>(dst_port >> 8);
  out[11] = static_cast<uint8_t>(dst_port);
  out[12] = protocol;
  return out;
}

FlowKey FlowKey::Decode(const std::array<uint8_t, 13>& b) {
  FlowKey k;
  for (int i = 0; i < 4; ++i) {
    k.src_addr = (k.src_addr << 8) | b[i];
    k.dst_addr = (k.dst_addr << 8) | b[4 + i];
  }
  k.src_port = static_cast<uint16_t>((b[8] << 8) | b[9]);
  k.dst_port = static_cast<uint16_t>((b[10] << 8) | b[11]);
  k.protocol = b[12];
  return k;
}

uint64_t FlowKey::Hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint8_t byte : Encode()) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  }
  return h;
}

FlowKey FlowKey::Reversed() const {
  FlowKey r = *this;
  r.src_addr = dst_addr;
  r.dst_addr = src_addr;
  r.src_port = dst_port;
  r.dst_port = src_port;
  return r;
}

Packet MakeAck(const Packet& data) {
  Packet ack;
  ack.type = PacketType::kAck;
  ack.key = data.key;
  ack.flow_id = data.flow_id;
  ack.psn = data.psn;
  ack.size = kAckWireBytes;
  ack.epoch = data.epoch;
  ack.acked_bytes = data.size;
  ack.echoed_timestamp = data.ingress_timestamp;
  ack.echoed_hop_count = data.hop_count;
  ack.src_host = data.src_host;
  ack.dst_host = data.dst_host;
  ack.last_of_flow = data.last_of_flow;
  ack.flowcut_id = data.flowcut_id;
  ack.vc = -1;
  return ack;
}

}  // namespace flowcut
