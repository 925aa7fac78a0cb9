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

#include "flowcut/workload.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "flowcut/topology.h"

namespace flowcut {

SizeDistribution::SizeDistribution(std::string name,
                                   std::vector<std::pair<int64_t, double>> points)
    : name_(std::move(name)), points_(std::move(points)) {
  Validate();
}

void SizeDistribution::Validate() const {
  if (points_.empty()) {
    throw ConfigError("size distribution '" + name_ + "' has no points");
  }
  for (size_t i = 0; i < points_.size(); ++i) {
    const auto& [size, prob] = points_[i];
    if (size < 0) throw ConfigError("negative flow size in '" + name_ + "'");
    // Only the first point may carry probability 0 (the support minimum).
    if (!(prob >= 0.0 && prob <= 1.0) || (i > 0 && prob == 0.0)) {
      throw ConfigError("cumulative probability out of range in '" + name_ + "'");
    }
    if (i > 0 && (size <= points_[i - 1].first || prob <= points_[i - 1].second)) {
      throw ConfigError("CDF points of '" + name_ +
                        "' must be strictly increasing (line " +
                        std::to_string(i + 1) + ")");
    }
  }
  if (std::abs(points_.back().second - 1.0) > 1e-9) {
    throw ConfigError("CDF '" + name_ + "' does not end at probability 1.0");
  }
}

SizeDistribution SizeDistribution::Parse(std::istream& in,
                                         const std::string& name) {
  std::vector<std::pair<int64_t, double>> points;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    double size = 0;
    double prob = 0;
    if (!(fields >> size)) continue;  // blank line
    if (!(fields >> prob)) {
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": expected 'size_bytes cumulative_probability'");
    }
    std::string extra;
    if (fields >> extra) {
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": trailing field '" + extra + "'");
    }
    points.emplace_back(static_cast<int64_t>(std::llround(size)), prob);
  }
  return SizeDistribution(name, std::move(points));
}

SizeDistribution SizeDistribution::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CDF file '" + path + "'");
  return Parse(in, path);
}

SizeDistribution SizeDistribution::Constant(int64_t size) {
  return SizeDistribution("constant-" + std::to_string(size), {{size, 1.0}});
}

int64_t SizeDistribution::Quantile(double u) const {
  if (u <= points_.front().second) return points_.front().first;
  for (size_t i = 1; i < points_.size(); ++i) {
    const auto& [s0, p0] = points_[i - 1];
    const auto& [s1, p1] = points_[i];
    if (u <= p1) {
      const double frac = (u - p0) / (p1 - p0);
      return static_cast<int64_t>(
          std::llround(static_cast<double>(s0) + frac * static_cast<double>(s1 - s0)));
    }
  }
  return points_.back().first;
}

double SizeDistribution::Mean() const {
  double mean = points_.front().second * static_cast<double>(points_.front().first);
  for (size_t i = 1; i < points_.size(); ++i) {
    const auto& [s0, p0] = points_[i - 1];
    const auto& [s1, p1] = points_[i];
    mean += (p1 - p0) * 0.5 * static_cast<double>(s0 + s1);
  }
  return mean;
}

namespace {

bool Excluded(uint32_t a, uint32_t b, std::span<const int> host_tor) {
  if (a == b) return true;
  return !host_tor.empty() && host_tor[a] >= 0 && host_tor[a] == host_tor[b];
}

}  // namespace

std::vector<FlowSpec> GeneratePermutation(uint32_t hosts, int64_t msg_size,
                                          Rng& rng,
                                          std::span<const int> host_tor) {
  if (hosts < 2) throw ConfigError("permutation needs at least 2 hosts");
  std::vector<uint32_t> perm(hosts);
  std::iota(perm.begin(), perm.end(), 0u);
  rng.Shuffle(perm);
  // Repair conflicting slots by swapping with a random compatible slot.
  for (int pass = 0; pass < 64; ++pass) {
    bool clean = true;
    for (uint32_t i = 0; i < hosts; ++i) {
      if (!Excluded(i, perm[i], host_tor)) continue;
      clean = false;
      const uint32_t offset = static_cast<uint32_t>(rng.UniformInt(hosts));
      for (uint32_t k = 0; k < hosts; ++k) {
        const uint32_t j = (offset + k) % hosts;
        if (j == i) continue;
        if (!Excluded(i, perm[j], host_tor) && !Excluded(j, perm[i], host_tor)) {
          std::swap(perm[i], perm[j]);
          break;
        }
      }
    }
    if (clean) {
      std::vector<FlowSpec> flows;
      flows.reserve(hosts);
      for (uint32_t i = 0; i < hosts; ++i) {
        flows.push_back(FlowSpec{i, perm[i], msg_size, 0, -1});
      }
      return flows;
    }
  }
  throw ConfigError("no permutation satisfies the partner exclusions");
}

std::vector<FlowSpec> GenerateAllToAll(uint32_t hosts, int64_t msg_size,
                                       int window) {
  if (hosts < 2) throw ConfigError("all-to-all needs at least 2 hosts");
  if (window < 1) throw ConfigError("all-to-all window must be >= 1");
  std::vector<FlowSpec> flows;
  flows.reserve(static_cast<size_t>(hosts) * (hosts - 1));
  // Flow id of (source i, step k) is (k-1)*N + i.
  for (uint32_t k = 1; k < hosts; ++k) {
    for (uint32_t i = 0; i < hosts; ++i) {
      FlowSpec f{i, (i + k) % hosts, msg_size, 0, -1};
      if (static_cast<int>(k) > window) {
        f.after = static_cast<int32_t>((k - 1 - window) * hosts + i);
      }
      flows.push_back(f);
    }
  }
  return flows;
}

std::vector<FlowSpec> GenerateRandomUniform(uint32_t hosts,
                                            const SizeDistribution& dist,
                                            int flows_per_host, Rng& rng,
                                            std::span<const int> host_tor) {
  if (hosts < 2) throw ConfigError("random-uniform needs at least 2 hosts");
  if (flows_per_host < 1) throw ConfigError("flows_per_host must be >= 1");
  for (uint32_t i = 0; i < hosts; ++i) {
    bool any = false;
    for (uint32_t j = 0; j < hosts && !any; ++j) any = !Excluded(i, j, host_tor);
    if (!any) throw ConfigError("host " + std::to_string(i) + " has no eligible partner");
  }
  std::vector<FlowSpec> flows;
  flows.reserve(static_cast<size_t>(hosts) * flows_per_host);
  for (int k = 0; k < flows_per_host; ++k) {
    for (uint32_t i = 0; i < hosts; ++i) {
      uint32_t dst;
      do {
        dst = static_cast<uint32_t>(rng.UniformInt(hosts));
      } while (Excluded(i, dst, host_tor));
      FlowSpec f{i, dst, dist.Sample(rng), 0, -1};
      if (k > 0) f.after = static_cast<int32_t>((k - 1) * hosts + i);
      flows.push_back(f);
    }
  }
  return flows;
}

}  // namespace flowcut
