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

#include "flowcut/congestion.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "flowcut/topology.h"

namespace flowcut {

void CongestionParams::Validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
  if (!(rtt_ratio_threshold > 0.0)) {
    throw ConfigError("rtt_ratio_threshold must be > 0");
  }
  if (!(rtt_growth_threshold > 0.0)) {
    throw ConfigError("rtt_growth_threshold must be > 0");
  }
  if (!(picos_per_byte > 0.0)) throw ConfigError("t_per_byte must be > 0");
}

double NormalizedRtt(SimTime measured, int64_t packet_size, int hops,
                     const CongestionParams& params, RttFloorTable& floor) {
  if (hops < 0 || hops > kMaxHopCount) {
    throw std::out_of_range("hop count " + std::to_string(hops) +
                            " does not fit the 4-bit header field");
  }
  const double serialization =
      static_cast<double>(packet_size) * hops * params.picos_per_byte;
  const double queue_free = static_cast<double>(measured) - serialization;
  if (!floor.has(hops)) {
    floor.Set(hops, queue_free);
    return 1.0;
  }
  if (queue_free < floor.floor_ps(hops)) floor.Set(hops, queue_free);
  const double denom = floor.floor_ps(hops) + serialization;
  if (denom <= 0.0) return 1.0;
  return std::max(1.0, static_cast<double>(measured) / denom);
}

void RttState::Update(double norm_rtt, double alpha) {
  if (!initialized) {
    initialized = true;
    rtt_ema = norm_rtt;
    last_norm_rtt = norm_rtt;
    rtt_delta_ema = 0.0;
    return;
  }
  const double delta = norm_rtt - last_norm_rtt;
  rtt_ema = alpha * norm_rtt + (1.0 - alpha) * rtt_ema;
  rtt_delta_ema = alpha * delta + (1.0 - alpha) * rtt_delta_ema;
  last_norm_rtt = norm_rtt;
}

DrainDecision EvaluateDrain(const RttState& state,
                            const CongestionParams& params) {
  if (state.rtt_ema > params.rtt_ratio_threshold ||
      state.rtt_delta_ema > params.rtt_growth_threshold) {
    return DrainDecision::kDrain;
  }
  return DrainDecision::kNone;
}

}  // namespace flowcut
