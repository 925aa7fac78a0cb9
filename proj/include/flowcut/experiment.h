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

#ifndef FLOWCUT_EXPERIMENT_H_
#define FLOWCUT_EXPERIMENT_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "flowcut/config.h"
#include "flowcut/metrics.h"
#include "flowcut/simulation.h"
#include "flowcut/topology.h"
#include "flowcut/workload.h"

namespace flowcut {

// Built topology with the failure plan applied. Degraded links are drawn
// per run seed so seeds see different failure sets.
Topology BuildTopology(const ExperimentConfig& config, uint64_t seed);

std::vector<FlowSpec> BuildWorkload(const ExperimentConfig& config,
                                    const Topology& topology, uint64_t seed);

SimConfig MakeSimConfig(const ExperimentConfig& config, uint64_t seed);

// Hash of the canonical config, ignoring output location, trace and seeds.
std::string ConfigDigest(const ExperimentConfig& config);

// One seeded run. Deadlock and invariant errors propagate.
RunReport RunOnce(const ExperimentConfig& config, uint64_t seed,
                  TraceSink trace = {});

// Writes flows.csv and summary.json into `dir`, creating it.
void WriteRunOutputs(const std::string& dir, const RunReport& report);

// Output directory of one seed under the configured output root.
std::string SeedOutputDir(const std::string& root, uint64_t seed);

struct SweepAxis {
  std::string path;  // dotted config path, e.g. routing.alpha
  std::vector<std::string> values;
};

// "routing.alpha=0.25,0.5" -> {routing.alpha, {0.25, 0.5}}.
SweepAxis ParseSweepAxis(const std::string& spec);

struct SweepRow {
  std::vector<std::string> axis_values;
  uint64_t seed = 0;
  double avg_fct_ns = 0;
  double p99_fct_ns = 0;
  double ooo_fraction = 0;
  double draining_impact = 0;
  uint64_t drains = 0;
  uint64_t max_table_entries = 0;
};

struct SweepPlan {
  std::vector<SweepAxis> axes;
  // One config per grid cell, row-major over `axes` (last axis fastest).
  std::vector<ExperimentConfig> cells;
  std::vector<std::vector<std::string>> cell_values;
};

// Expands the Cartesian product and validates every cell up front.
SweepPlan PlanSweep(const YAML::Node& base, const std::string& base_dir,
                    const std::vector<SweepAxis>& axes);

// Runs every cell for every seed on `jobs` worker threads (0: hardware
// concurrency). Rows come back in cell-major, then seed, order.
std::vector<SweepRow> RunSweep(const SweepPlan& plan, unsigned jobs = 0);

void WriteSweepCsv(std::ostream& out, const std::vector<SweepAxis>& axes,
                   const std::vector<SweepRow>& rows);

}  // namespace flowcut

#endif  // FLOWCUT_EXPERIMENT_H_
