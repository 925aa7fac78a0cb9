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

#ifndef FLOWCUT_SIM_TIME_H_
#define FLOWCUT_SIM_TIME_H_

#include <cstdint>

namespace flowcut {

// Simulated time in integer picoseconds. Serialization of a 2048 B packet at
// 200 Gb/s is 81.92 ns, which is exact at this resolution.
using SimTime = int64_t;

inline constexpr SimTime kPicosPerNano = 1000;
inline constexpr SimTime kPicosPerMicro = 1000 * kPicosPerNano;
inline constexpr SimTime kPicosPerSecond = 1'000'000 * kPicosPerMicro;

constexpr SimTime Nanos(int64_t ns) { return ns * kPicosPerNano; }
constexpr SimTime Micros(int64_t us) { return us * kPicosPerMicro; }
constexpr double ToNanos(SimTime t) {
  return static_cast<double>(t) / static_cast<double>(kPicosPerNano);
}
constexpr int64_t ToWholeNanos(SimTime t) { return t / kPicosPerNano; }

// Time to clock `bytes` onto a wire of `bits_per_second`.
constexpr SimTime SerializationTime(int64_t bytes, int64_t bits_per_second) {
  return (bytes * 8 * kPicosPerSecond) / bits_per_second;
}

// Seconds-per-byte expressed in picoseconds per byte (the `t` term of the
// normalized RTT), as a double so fractional rates survive.
constexpr double PicosPerByte(int64_t bits_per_second) {
  return 8.0 * static_cast<double>(kPicosPerSecond) /
         static_cast<double>(bits_per_second);
}

}  // namespace flowcut

#endif  // FLOWCUT_SIM_TIME_H_
