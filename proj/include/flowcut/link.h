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

#ifndef FLOWCUT_LINK_H_
#define FLOWCUT_LINK_H_

#include <array>
#include <cstdint>

#include "flowcut/sim_time.h"

namespace flowcut {

// Data packets travel on virtual channel = number of switches traversed so
// far, which keeps the channel dependency graph acyclic on every topology we
// build (longest path is 7 links). Control packets bypass credits.
inline constexpr int kNumVirtualChannels = 8;
inline constexpr int kControlChannel = -1;

// One direction of a physical link, with credit-based flow control towards
// the downstream input buffer.
class Link {
 public:
  Link(int64_t bits_per_second, SimTime propagation_latency,
       int64_t buffer_bytes, bool credit_limited);

  // True when the wire is idle at `now` and the downstream buffer has room.
  bool CanSend(SimTime now, int vc, int64_t size) const;
  bool HasCredits(int vc, int64_t size) const;

  // Serializes `size` bytes starting at `depart` and consumes credits.
  // Returns the arrival time of the last bit at the downstream end.
  // Throws std::logic_error on overlap or insufficient credits.
  SimTime Transmit(SimTime depart, int vc, int64_t size);

  // Downstream drained `size` bytes that arrived on `vc`.
  void ReturnCredits(int vc, int64_t size);

  SimTime SerializationOf(int64_t size) const {
    return SerializationTime(size, bits_per_second_);
  }
  void Degrade(int64_t divisor);

  int64_t bits_per_second() const { return bits_per_second_; }
  SimTime propagation_latency() const { return propagation_latency_; }
  int64_t buffer_bytes() const { return buffer_bytes_; }
  bool credit_limited() const { return credit_limited_; }
  int64_t credits(int vc) const { return credits_[vc]; }
  SimTime busy_until() const { return busy_until_; }
  int64_t bytes_sent() const { return bytes_sent_; }

 private:
  int64_t bits_per_second_;
  SimTime propagation_latency_;
  int64_t buffer_bytes_;
  bool credit_limited_;
  std::array<int64_t, kNumVirtualChannels> credits_{};
  SimTime busy_until_ = 0;
  int64_t bytes_sent_ = 0;
};

}  // namespace flowcut

#endif  // FLOWCUT_LINK_H_
