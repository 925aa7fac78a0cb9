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

#include "flowcut/experiment.h"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "flowcut/random.h"

namespace flowcut {

namespace {

constexpr uint64_t kWorkloadSalt = 0x776f726b6c6f6164ULL;
constexpr uint64_t kFailureSalt = 0x6661696c75726573ULL;
constexpr uint64_t kSimSalt = 0x73696d756c617465ULL;

uint64_t DeriveSeed(uint64_t seed, uint64_t salt) { return Mix64(seed ^ salt); }

std::vector<int> HostTors(const ExperimentConfig& config, const Topology& topology) {
  std::vector<int> tors;
  if (!config.workload.exclude_same_tor || topology.kind() != TopologyKind::kFatTree) {
    return tors;
  }
  tors.reserve(topology.num_hosts());
  for (uint32_t h = 0; h < topology.num_hosts(); ++h) tors.push_back(topology.HostTor(h));
  return tors;
}

void ValidateExplicitFlows(const std::vector<FlowSpec>& flows, uint32_t hosts) {
  for (size_t i = 0; i < flows.size(); ++i) {
    const FlowSpec& f = flows[i];
    const std::string where = "workload.flows[" + std::to_string(i) + "]";
    if (f.src >= hosts || f.dst >= hosts) {
      throw ConfigError(where + ": host id out of range (" + std::to_string(hosts) + " hosts)");
    }
    if (f.src == f.dst) throw ConfigError(where + ": src equals dst");
    if (f.after >= static_cast<int32_t>(i)) {
      throw ConfigError(where + ": after must name an earlier flow");
    }
  }
}

}  // namespace

Topology BuildTopology(const ExperimentConfig& config, uint64_t seed) {
  const TopologyConfig& t = config.topology;
  Topology topo = [&] {
    switch (t.kind) {
      case TopologyKind::kStar: return Topology::Star(t.star_hosts, t.link);
      case TopologyKind::kFatTree: return Topology::FatTree(t.fat_tree, t.link);
      case TopologyKind::kDragonfly: return Topology::Dragonfly(t.dragonfly, t.link);
    }
    throw ConfigError("unknown topology kind");
  }();
  if (config.failures.fraction <= 0.0) return topo;
  FailurePlan plan = config.failures;
  plan.seed = DeriveSeed(plan.seed ^ seed, kFailureSalt);
  return InjectFailures(topo, plan);
}

std::vector<FlowSpec> BuildWorkload(const ExperimentConfig& config,
                                    const Topology& topology, uint64_t seed) {
  const WorkloadConfig& w = config.workload;
  const uint32_t hosts = topology.num_hosts();
  Rng rng(DeriveSeed(seed, kWorkloadSalt));
  const std::vector<int> tors = HostTors(config, topology);
  switch (w.kind) {
    case WorkloadKind::kPermutation:
      return GeneratePermutation(hosts, w.message_bytes, rng, tors);
    case WorkloadKind::kAllToAll:
      return GenerateAllToAll(hosts, w.message_bytes, w.window);
    case WorkloadKind::kRandomUniform: {
      const SizeDistribution dist = SizeDistribution::Load(ResolveDistributionPath(config));
      return GenerateRandomUniform(hosts, dist, w.flows_per_host, rng, tors);
    }
    case WorkloadKind::kExplicit:
      ValidateExplicitFlows(w.flows, hosts);
      return w.flows;
  }
  throw ConfigError("unknown workload kind");
}

SimConfig MakeSimConfig(const ExperimentConfig& config, uint64_t seed) {
  SimConfig sim = config.sim;
  sim.seed = DeriveSeed(seed, kSimSalt);
  sim.flowlet_timeout = config.flowlet_timeout_override > 0
                            ? config.flowlet_timeout_override
                            : FlowletPresetTimeout(config.flowlet_preset);
  sim.congestion.picos_per_byte = PicosPerByte(config.topology.link.bits_per_second);
  return sim;
}

std::string ConfigDigest(const ExperimentConfig& config) {
  // Only what shapes a run: where results go and which seeds are listed do not.
  ExperimentConfig c = config;
  c.output.clear();
  c.trace = false;
  c.seeds = {0};
  return Fnv64Hex(SerializeConfig(c));
}

RunReport RunOnce(const ExperimentConfig& config, uint64_t seed, TraceSink trace) {
  const Topology topo = BuildTopology(config, seed);
  std::vector<FlowSpec> flows = BuildWorkload(config, topo, seed);
  Simulation sim(topo, MakeSimConfig(config, seed), std::move(flows));
  if (trace) sim.set_trace(std::move(trace));
  RunReport report;
  report.config_digest = ConfigDigest(config);
  report.seed = seed;
  report.result = sim.Run();
  return report;
}

std::string SeedOutputDir(const std::string& root, uint64_t seed) {
  return (std::filesystem::path(root) / ("seed-" + std::to_string(seed))).string();
}

void WriteRunOutputs(const std::string& dir, const RunReport& report) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  {
    std::ofstream out(base / "flows.csv");
    if (!out) throw std::runtime_error("cannot write " + (base / "flows.csv").string());
    WriteFlowsCsv(out, report.result.flows);
  }
  std::ofstream out(base / "summary.json");
  if (!out) throw std::runtime_error("cannot write " + (base / "summary.json").string());
  WriteSummaryJson(out, report);
}

SweepAxis ParseSweepAxis(const std::string& spec) {
  const size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw ConfigError("malformed axis '" + spec + "', expected name=v1,v2,...");
  }
  SweepAxis axis;
  axis.path = spec.substr(0, eq);
  std::stringstream ss(spec.substr(eq + 1));
  std::string v;
  while (std::getline(ss, v, ',')) {
    if (v.empty()) throw ConfigError("axis " + axis.path + ": empty value");
    axis.values.push_back(v);
  }
  return axis;
}

SweepPlan PlanSweep(const YAML::Node& base, const std::string& base_dir,
                    const std::vector<SweepAxis>& axes) {
  SweepPlan plan;
  plan.axes = axes;
  size_t total = 1;
  for (const SweepAxis& a : axes) {
    if (a.values.empty()) throw ConfigError("axis " + a.path + " has no values");
    total *= a.values.size();
  }
  for (size_t cell = 0; cell < total; ++cell) {
    YAML::Node node = YAML::Clone(base);
    if (!node.IsDefined() || node.IsNull()) node = YAML::Node(YAML::NodeType::Map);
    std::vector<std::string> values(axes.size());
    size_t rest = cell;
    for (size_t i = axes.size(); i-- > 0;) {
      values[i] = axes[i].values[rest % axes[i].values.size()];
      rest /= axes[i].values.size();
    }
    for (size_t i = 0; i < axes.size(); ++i) ApplyOverride(node, axes[i].path, values[i]);
    plan.cells.push_back(ParseConfig(node, base_dir));
    plan.cell_values.push_back(std::move(values));
  }
  return plan;
}

std::vector<SweepRow> RunSweep(const SweepPlan& plan, unsigned jobs) {
  struct Job {
    size_t cell;
    uint64_t seed;
  };
  std::vector<Job> work;
  for (size_t c = 0; c < plan.cells.size(); ++c) {
    for (uint64_t seed : plan.cells[c].seeds) work.push_back({c, seed});
  }
  std::vector<SweepRow> rows(work.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<size_t>(jobs, std::max<size_t>(work.size(), 1)));

  std::atomic<size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  auto worker = [&] {
    for (size_t i = next++; i < work.size(); i = next++) {
      try {
        const Job& job = work[i];
        const RunReport report = RunOnce(plan.cells[job.cell], job.seed);
        const auto& flows = report.result.flows;
        SweepRow& row = rows[i];
        row.axis_values = plan.cell_values[job.cell];
        row.seed = job.seed;
        row.avg_fct_ns = MeanFctNanos(flows);
        row.p99_fct_ns = P99FctNanos(flows);
        row.ooo_fraction = OooFraction(flows);
        row.draining_impact = DrainingImpact(flows);
        for (const FlowRecord& f : flows) row.drains += f.drains;
        const auto& tables = report.result.stats.max_table_entries;
        row.max_table_entries = tables.empty() ? 0 : *std::max_element(tables.begin(), tables.end());
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next = work.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return rows;
}

void WriteSweepCsv(std::ostream& out, const std::vector<SweepAxis>& axes,
                   const std::vector<SweepRow>& rows) {
  for (const SweepAxis& a : axes) out << a.path << ',';
  out << "seed,avg_fct_ns,p99_fct_ns,ooo_fraction,draining_impact,drains,max_table_entries\n";
  for (const SweepRow& r : rows) {
    for (const std::string& v : r.axis_values) out << v << ',';
    out << r.seed << ',' << r.avg_fct_ns << ',' << r.p99_fct_ns << ',' << r.ooo_fraction << ','
        << r.draining_impact << ',' << r.drains << ',' << r.max_table_entries << '\n';
  }
}

}  // namespace flowcut
