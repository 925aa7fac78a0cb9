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

#include <gtest/gtest.h>

#include <stdexcept>

namespace flowcut {
namespace {

constexpr int64_t k200G = 200'000'000'000;

// Oracle: size * 8 / bandwidth, in picoseconds.
SimTime OracleSerialization(int64_t bytes, double bps) {
  return static_cast<SimTime>(bytes * 8.0 / bps * 1e12 + 0.5);
}

TEST(LinkTest, ArrivalIsSerializationPlusLatency) {
  Link link(k200G, Micros(1), 64 * 1024, true);
  EXPECT_EQ(link.SerializationOf(2048), OracleSerialization(2048, 200e9));
  EXPECT_EQ(link.SerializationOf(2048), 81'920);
  EXPECT_EQ(link.Transmit(0, 0, 2048), 1'081'920);
}

TEST(LinkTest, ZeroByteControlArrivesAfterLatency) {
  Link link(k200G, Micros(1), 0, false);
  EXPECT_EQ(link.Transmit(Nanos(5), kControlChannel, 0), Nanos(5) + Micros(1));
}

TEST(LinkTest, DegradedLinkSerializesTenTimesSlower) {
  Link link(k200G, Micros(1), 64 * 1024, true);
  link.Degrade(10);
  EXPECT_EQ(link.bits_per_second(), 20'000'000'000);
  EXPECT_EQ(link.SerializationOf(2048), OracleSerialization(2048, 20e9));
  EXPECT_EQ(link.SerializationOf(2048), 819'200);
}

TEST(LinkTest, CreditsBlockAndReturn) {
  Link link(k200G, 0, 4096, true);
  EXPECT_EQ(link.credits(0), 4096);
  link.Transmit(0, 0, 2048);
  const SimTime t = link.busy_until();
  link.Transmit(t, 0, 2048);
  EXPECT_EQ(link.credits(0), 0);
  EXPECT_FALSE(link.CanSend(link.busy_until(), 0, 1));
  EXPECT_TRUE(link.CanSend(link.busy_until(), 1, 2048));  // other VC
  EXPECT_THROW(link.Transmit(link.busy_until(), 0, 1), std::logic_error);
  link.ReturnCredits(0, 2048);
  EXPECT_EQ(link.credits(0), 2048);
  EXPECT_TRUE(link.CanSend(link.busy_until(), 0, 2048));
}

TEST(LinkTest, OverlappingTransmissionThrows) {
  Link link(k200G, 0, 64 * 1024, true);
  link.Transmit(0, 0, 2048);
  EXPECT_FALSE(link.CanSend(Nanos(10), 0, 64));
  EXPECT_THROW(link.Transmit(Nanos(10), 0, 64), std::logic_error);
  EXPECT_NO_THROW(link.Transmit(SimTime{81920}, 0, 64));
}

TEST(LinkTest, ControlChannelIgnoresCredits) {
  Link link(k200G, 0, 2048, true);
  link.Transmit(0, 0, 2048);
  EXPECT_TRUE(link.CanSend(link.busy_until(), kControlChannel, 20));
}

}  // namespace
}  // namespace flowcut
