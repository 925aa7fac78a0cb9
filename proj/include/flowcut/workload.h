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

#ifndef FLOWCUT_WORKLOAD_H_
#define FLOWCUT_WORKLOAD_H_

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flowcut/random.h"
#include "flowcut/sim_time.h"

namespace flowcut {

// One message. A flow with `after >= 0` starts `start` after flow `after`
// completes (closed-loop and windowed schedules); otherwise at `start`.
struct FlowSpec {
  uint32_t src = 0;
  uint32_t dst = 0;
  int64_t size = 0;
  SimTime start = 0;
  int32_t after = -1;
  friend bool operator==(const FlowSpec&, const FlowSpec&) = default;
};

// Piecewise-linear flow size CDF.
class SizeDistribution {
 public:
  SizeDistribution() = default;
  SizeDistribution(std::string name,
                   std::vector<std::pair<int64_t, double>> points);

  // Text format: one "size_bytes cumulative_probability" pair per line,
  // '#' starts a comment. Throws ConfigError on malformed input.
  static SizeDistribution Parse(std::istream& in, const std::string& name);
  static SizeDistribution Load(const std::string& path);
  static SizeDistribution Constant(int64_t size);

  // Inverse CDF with linear interpolation between points; `u` in [0, 1).
  int64_t Quantile(double u) const;
  int64_t Sample(Rng& rng) const { return Quantile(rng.Uniform01()); }
  // Mean of the interpolated distribution.
  double Mean() const;

  const std::string& name() const { return name_; }
  const std::vector<std::pair<int64_t, double>>& points() const { return points_; }
  int64_t min_size() const { return points_.front().first; }
  int64_t max_size() const { return points_.back().first; }

 private:
  void Validate() const;

  std::string name_;
  std::vector<std::pair<int64_t, double>> points_;
};

inline int64_t SampleFlowSize(const SizeDistribution& dist, Rng& rng) {
  return dist.Sample(rng);
}

// `host_tor` (optional) assigns each host a ToR; pairs on the same ToR are
// excluded so traffic crosses the aggregation layer.
std::vector<FlowSpec> GeneratePermutation(uint32_t hosts, int64_t msg_size,
                                          Rng& rng,
                                          std::span<const int> host_tor = {});

// Every ordered pair once. Source i sends to (i+k) mod N for k = 1..N-1 with
// at most `window` of its flows outstanding.
std::vector<FlowSpec> GenerateAllToAll(uint32_t hosts, int64_t msg_size,
                                       int window = 1);

// Closed loop: each host sends `flows_per_host` messages back to back, each
// to a fresh random partner with a sampled size.
std::vector<FlowSpec> GenerateRandomUniform(uint32_t hosts,
                                            const SizeDistribution& dist,
                                            int flows_per_host, Rng& rng,
                                            std::span<const int> host_tor = {});

}  // namespace flowcut

#endif  // FLOWCUT_WORKLOAD_H_
