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

#include "flowcut/link.h"

#include <stdexcept>
#include <string>

namespace flowcut {

Link::Link(int64_t bits_per_second, SimTime propagation_latency,
           int64_t buffer_bytes, bool credit_limited)
    : bits_per_second_(bits_per_second),
      propagation_latency_(propagation_latency),
      buffer_bytes_(buffer_bytes),
      credit_limited_(credit_limited) {
  if (bits_per_second <= 0) throw std::invalid_argument("bandwidth must be > 0");
  credits_.fill(buffer_bytes);
}

bool Link::HasCredits(int vc, int64_t size) const {
  if (vc == kControlChannel || !credit_limited_) return true;
  return credits_[vc] >= size;
}

bool Link::CanSend(SimTime now, int vc, int64_t size) const {
  return busy_until_ <= now && HasCredits(vc, size);
}

SimTime Link::Transmit(SimTime depart, int vc, int64_t size) {
  if (depart < busy_until_) {
    throw std::logic_error("overlapping transmission on link");
  }
  if (!HasCredits(vc, size)) {
    throw std::logic_error("transmit without credits: vc=" +
                           std::to_string(vc) + " size=" +
                           std::to_string(size));
  }
  if (vc != kControlChannel && credit_limited_) credits_[vc] -= size;
  SimTime done = depart + SerializationOf(size);
  busy_until_ = done;
  bytes_sent_ += size;
  return done + propagation_latency_;
}

void Link::ReturnCredits(int vc, int64_t size) {
  if (vc == kControlChannel || !credit_limited_) return;
  credits_[vc] += size;
  if (credits_[vc] > buffer_bytes_) {
    throw std::logic_error("credit overflow on link");
  }
}

void Link::Degrade(int64_t divisor) {
  if (divisor < 1) throw std::invalid_argument("degrade divisor must be >= 1");
  bits_per_second_ /= divisor;
  if (bits_per_second_ <= 0) bits_per_second_ = 1;
}

}  // namespace flowcut
