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

#ifndef FLOWCUT_CONFIG_H_
#define FLOWCUT_CONFIG_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "flowcut/simulation.h"
#include "flowcut/topology.h"
#include "flowcut/workload.h"

namespace YAML {
class Node;
}  // namespace YAML

namespace flowcut {

struct TopologyConfig {
  TopologyKind kind = TopologyKind::kFatTree;
  FatTreeParams fat_tree{4, 8, 1, 4, 4, 16};
  DragonflyParams dragonfly;
  int star_hosts = 2;
  LinkDefaults link;
  friend bool operator==(const TopologyConfig&, const TopologyConfig&) = default;
};

enum class WorkloadKind : uint8_t { kPermutation, kAllToAll, kRandomUniform, kExplicit };
const char* WorkloadKindName(WorkloadKind kind);

struct WorkloadConfig {
  WorkloadKind kind = WorkloadKind::kPermutation;
  int64_t message_bytes = 128 * 1024;
  // Random-uniform only: bundled CDF name or a path to a CDF file.
  std::string distribution = "websearch";
  int flows_per_host = 1;
  int window = 1;
  bool exclude_same_tor = true;
  std::vector<FlowSpec> flows;  // explicit workloads
  friend bool operator==(const WorkloadConfig&, const WorkloadConfig&) = default;
};

struct ExperimentConfig {
  TopologyConfig topology;
  SimConfig sim;  // seed is overwritten per run
  FlowletPreset flowlet_preset = FlowletPreset::kBalanced;
  SimTime flowlet_timeout_override = 0;  // 0: use the preset
  WorkloadConfig workload;
  FailurePlan failures;
  std::vector<uint64_t> seeds{1};
  std::string output = "out";
  bool trace = false;
  // Directory relative paths in the file resolve against; not serialized.
  std::string base_dir = ".";
  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.topology == b.topology && a.sim == b.sim &&
           a.flowlet_preset == b.flowlet_preset &&
           a.flowlet_timeout_override == b.flowlet_timeout_override &&
           a.workload == b.workload && a.failures == b.failures &&
           a.seeds == b.seeds && a.output == b.output && a.trace == b.trace;
  }
};

// Parses and validates. Unknown keys and malformed values throw ConfigError
// naming the offending path.
ExperimentConfig ParseConfig(const YAML::Node& root, const std::string& base_dir = ".");
ExperimentConfig ParseConfigText(const std::string& text, const std::string& base_dir = ".");
ExperimentConfig LoadConfigFile(const std::string& path);
YAML::Node LoadConfigNode(const std::string& path);

// Canonical YAML with every field spelled out.
std::string SerializeConfig(const ExperimentConfig& config);

// Sets `dotted.path` in `root` to the scalar `value` (parsed as YAML).
void ApplyOverride(YAML::Node& root, const std::string& dotted_path,
                   const std::string& value);

// Resolves the workload distribution to a file path.
std::string ResolveDistributionPath(const ExperimentConfig& config);

// Directory holding the bundled CDF files.
std::string BundledDataDir();

}  // namespace flowcut

#endif  // FLOWCUT_CONFIG_H_
