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

#include "flowcut/event_queue.h"

#include <algorithm>

namespace flowcut {

uint64_t EventQueue::Schedule(SimTime time, uint32_t target, EventKind kind,
                              uint32_t port, uint64_t payload) {
  if (time < now_) {
    throw SchedulingError("event scheduled in the past: t=" +
                          std::to_string(time) +
                          " now=" + std::to_string(now_));
  }
  Event ev;
  ev.time = time;
  ev.sequence = next_sequence_++;
  ev.target = target;
  ev.kind = kind;
  ev.port = port;
  ev.payload = payload;
  heap_.push_back(ev);
  std::push_heap(heap_.begin(), heap_.end(), Later);
  return ev.sequence;
}

Event EventQueue::Pop() {
  std::pop_heap(heap_.begin(), heap_.end(), Later);
  Event ev = heap_.back();
  heap_.pop_back();
  now_ = ev.time;
  ++dispatched_;
  return ev;
}

}  // namespace flowcut
