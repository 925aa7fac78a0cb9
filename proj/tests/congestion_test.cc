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

#include <gtest/gtest.h>

#include <stdexcept>

#include "flowcut/random.h"
#include "flowcut/topology.h"

namespace flowcut {
namespace {

CongestionParams Params200G() {
  CongestionParams p;
  p.picos_per_byte = 1e12 / 25e9;  // 200 Gb/s = 25e9 B/s
  return p;
}

TEST(NormalizedRttTest, FirstSampleInitializesFloorAndReturnsOne) {
  RttFloorTable floor;
  const CongestionParams p = Params200G();
  EXPECT_DOUBLE_EQ(NormalizedRtt(Nanos(4000) + 245'760, 2048, 3, p, floor), 1.0);
  EXPECT_TRUE(floor.has(3));
  EXPECT_DOUBLE_EQ(floor.floor_ps(3), 4'000'000.0);
}

TEST(NormalizedRttTest, MeasuredAtFloorIsOne) {
  RttFloorTable floor;
  floor.Set(3, 4'000'000.0);
  EXPECT_DOUBLE_EQ(NormalizedRtt(Nanos(4000) + 245'760, 2048, 3, Params200G(), floor), 1.0);
}

TEST(NormalizedRttTest, DeskCheckValue) {
  RttFloorTable floor;
  floor.Set(3, 4'000'000.0);
  // p*h*t = 2048 * 3 / 25e9 s = 245.76 ns.
  const double oracle = 12000.0 / (4000.0 + 2048.0 * 3 / 25e9 * 1e9);
  const double got = NormalizedRtt(Nanos(12000), 2048, 3, Params200G(), floor);
  EXPECT_NEAR(got, oracle, 1e-12);
  EXPECT_NEAR(got, 2.826, 5e-4);
}

TEST(NormalizedRttTest, ExtraSerializationDoesNotChangeValue) {
  const CongestionParams p = Params200G();
  const double queue = 3'000'000.0;  // fixed queuing delay in ps
  for (int64_t size : {2048, 4096}) {
    RttFloorTable floor;
    floor.Set(3, 4'000'000.0);
    const double ser = size * 3 * p.picos_per_byte;
    const SimTime measured = static_cast<SimTime>(4'000'000.0 + ser + queue);
    EXPECT_NEAR(NormalizedRtt(measured, size, 3, p, floor),
                (4'000'000.0 + ser + queue) / (4'000'000.0 + ser), 1e-9)
        << size;
  }
  EXPECT_DOUBLE_EQ(4096 * 3 * p.picos_per_byte - 2048 * 3 * p.picos_per_byte, 245'760.0);
}

TEST(NormalizedRttTest, HopsOutsideFourBitsThrow) {
  RttFloorTable floor;
  EXPECT_THROW(NormalizedRtt(Nanos(1), 64, 16, Params200G(), floor), std::out_of_range);
  EXPECT_THROW(NormalizedRtt(Nanos(1), 64, -1, Params200G(), floor), std::out_of_range);
  EXPECT_NO_THROW(NormalizedRtt(Nanos(1), 64, 15, Params200G(), floor));
}

TEST(NormalizedRttTest, PropertyNeverBelowOneAndFloorNonIncreasing) {
  Rng rng(7);
  RttFloorTable floor;
  const CongestionParams p = Params200G();
  double prev[kMaxHopCount + 1];
  for (int i = 0; i < 20000; ++i) {
    const int h = static_cast<int>(rng.UniformInt(kMaxHopCount + 1));
    const int64_t size = 64 + static_cast<int64_t>(rng.UniformInt(2048 - 63));
    const SimTime measured = Nanos(2000) + static_cast<SimTime>(rng.UniformInt(Nanos(50000)));
    const bool had = floor.has(h);
    EXPECT_GE(NormalizedRtt(measured, size, h, p, floor), 1.0);
    if (had) EXPECT_LE(floor.floor_ps(h), prev[h]);
    prev[h] = floor.floor_ps(h);
  }
}

TEST(RttStateTest, EmaFollowsRecurrence) {
  RttState s;
  s.Update(2.0, 0.5);
  EXPECT_DOUBLE_EQ(s.rtt_ema, 2.0);
  EXPECT_DOUBLE_EQ(s.rtt_delta_ema, 0.0);
  s.Update(4.0, 0.5);
  EXPECT_DOUBLE_EQ(s.rtt_ema, 0.5 * 4.0 + 0.5 * 2.0);
  EXPECT_DOUBLE_EQ(s.rtt_delta_ema, 0.5 * 2.0);
  EXPECT_DOUBLE_EQ(s.last_norm_rtt, 4.0);
}

TEST(EvaluateDrainTest, RatioAboveThresholdDrains) {
  CongestionParams p;
  RttState s;
  s.initialized = true;
  s.rtt_ema = 4.2;
  EXPECT_EQ(EvaluateDrain(s, p), DrainDecision::kDrain);
  s.rtt_ema = 4.0;  // strict inequality
  EXPECT_EQ(EvaluateDrain(s, p), DrainDecision::kNone);
}

TEST(EvaluateDrainTest, IdleNetworkNeverDrains) {
  CongestionParams p;
  RttState s;
  for (int i = 0; i < 1000; ++i) {
    s.Update(1.0, p.alpha);
    EXPECT_EQ(EvaluateDrain(s, p), DrainDecision::kNone);
  }
}

TEST(EvaluateDrainTest, GrowthTriggerDrainsBelowRatio) {
  CongestionParams p;
  RttState s;
  s.initialized = true;
  s.rtt_ema = 2.0;
  s.rtt_delta_ema = 0.6;
  EXPECT_EQ(EvaluateDrain(s, p), DrainDecision::kDrain);
}

TEST(CongestionParamsTest, ValidateRejectsNonPositive) {
  CongestionParams p;
  EXPECT_NO_THROW(p.Validate());
  p.alpha = 0.0;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = {};
  p.alpha = 1.5;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = {};
  p.rtt_ratio_threshold = 0.0;
  EXPECT_THROW(p.Validate(), ConfigError);
}

}  // namespace
}  // namespace flowcut
