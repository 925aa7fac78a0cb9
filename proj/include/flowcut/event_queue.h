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

#ifndef FLOWCUT_EVENT_QUEUE_H_
#define FLOWCUT_EVENT_QUEUE_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowcut/sim_time.h"

namespace flowcut {

enum class EventKind : uint8_t {
  kPacketArrival,  // packet finished propagating onto (target, port)
  kTxComplete,     // (target, port) finished serializing its current packet
  kTimer,          // host-side timer (resume timeout, flow start)
  kControl,        // internal control hook used by tests
};

struct Event {
  SimTime time = 0;
  uint64_t sequence = 0;
  uint32_t target = 0;
  EventKind kind = EventKind::kTimer;
  uint32_t port = 0;
  uint64_t payload = 0;
};

class SchedulingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Min-heap on (time, sequence). Sequences are assigned on insertion so equal
// timestamps dispatch in scheduling order.
class EventQueue {
 public:
  // Throws SchedulingError if `time` precedes the current time.
  uint64_t Schedule(SimTime time, uint32_t target, EventKind kind,
                    uint32_t port = 0, uint64_t payload = 0);

  // Removes the earliest event and advances the clock to it.
  Event Pop();

  bool empty() const { return heap_.empty(); }
  size_t size() const { return heap_.size(); }
  SimTime now() const { return now_; }
  uint64_t dispatched() const { return dispatched_; }

 private:
  static bool Later(const Event& a, const Event& b) {
    if (a.time != b.time) return a.time > b.time;
    return a.sequence > b.sequence;
  }

  std::vector<Event> heap_;
  SimTime now_ = 0;
  uint64_t next_sequence_ = 0;
  uint64_t dispatched_ = 0;
};

}  // namespace flowcut

#endif  // FLOWCUT_EVENT_QUEUE_H_
