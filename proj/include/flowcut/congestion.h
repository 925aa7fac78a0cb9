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

#ifndef FLOWCUT_CONGESTION_H_
#define FLOWCUT_CONGESTION_H_

#include <array>
#include <cstdint>

#include "flowcut/packet.h"
#include "flowcut/sim_time.h"

namespace flowcut {

struct CongestionParams {
  double alpha = 0.9;  // EMA weight of the newest sample
  double rtt_ratio_threshold = 4.0;
  double rtt_growth_threshold = 0.5;
  double picos_per_byte = PicosPerByte(200'000'000'000);  // `t`

  // Throws ConfigError when a field is not strictly positive or alpha > 1.
  void Validate() const;
  friend bool operator==(const CongestionParams&, const CongestionParams&) = default;
};

// Minimum observed queue-free RTT per hop count, shared by all flows that
// cross a switch (or NIC).
class RttFloorTable {
 public:
  bool has(int hops) const { return seen_[hops]; }
  double floor_ps(int hops) const { return floor_[hops]; }
  void Set(int hops, double floor_ps) {
    seen_[hops] = true;
    floor_[hops] = floor_ps;
  }

 private:
  std::array<double, kMaxHopCount + 1> floor_{};
  std::array<bool, kMaxHopCount + 1> seen_{};
};

// measured / (r_min(h) + p*h*t), clamped to >= 1. The serialization term is
// removed from `measured` before it updates r_min(h); the first sample for a
// hop count initializes the floor and yields exactly 1.
// Throws std::out_of_range for hop counts outside the 4-bit header field.
double NormalizedRtt(SimTime measured, int64_t packet_size, int hops,
                     const CongestionParams& params, RttFloorTable& floor);

// Per-flow congestion estimate kept at the decision point.
struct RttState {
  bool initialized = false;
  double rtt_ema = 1.0;
  double last_norm_rtt = 1.0;
  double rtt_delta_ema = 0.0;

  void Update(double norm_rtt, double alpha);
};

enum class DrainDecision : uint8_t { kNone, kDrain };

// Drain when either moving average strictly exceeds its threshold.
DrainDecision EvaluateDrain(const RttState& state,
                            const CongestionParams& params);

}  // namespace flowcut

#endif  // FLOWCUT_CONGESTION_H_
