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

// Command-line front end: run, sweep, model and export-topology.
//
// Exit status: 0 success, 1 configuration error, 2 deadlock or invariant
// failure.

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flowcut/analytics.h"
#include "flowcut/config.h"
#include "flowcut/experiment.h"

namespace {

using flowcut::ConfigError;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRun = 2;

std::string ParentDir(const std::string& path) {
  const std::filesystem::path p(path);
  return p.has_parent_path() ? p.parent_path().string() : ".";
}

flowcut::ExperimentConfig Load(const std::string& path, std::optional<uint64_t> seed,
                               const std::string& out, bool trace, bool check) {
  flowcut::ExperimentConfig cfg = flowcut::LoadConfigFile(path);
  if (seed) cfg.seeds = {*seed};
  if (!out.empty()) cfg.output = out;
  if (trace) cfg.trace = true;
  if (check) cfg.sim.check_invariants = true;
  return cfg;
}

int Run(const flowcut::ExperimentConfig& cfg) {
  // Build everything first so a bad config leaves no output behind.
  for (uint64_t seed : cfg.seeds) {
    const flowcut::Topology topo = flowcut::BuildTopology(cfg, seed);
    flowcut::BuildWorkload(cfg, topo, seed);
  }
  for (uint64_t seed : cfg.seeds) {
    const std::string dir = flowcut::SeedOutputDir(cfg.output, seed);
    std::ofstream trace_out;
    flowcut::TraceSink sink;
    if (cfg.trace) {
      std::filesystem::create_directories(dir);
      trace_out.open(std::filesystem::path(dir) / "trace.txt");
      sink = [&trace_out](const flowcut::TraceRecord& r) {
        flowcut::WriteTraceLine(trace_out, r);
      };
    }
    const flowcut::RunReport report = flowcut::RunOnce(cfg, seed, sink);
    flowcut::WriteRunOutputs(dir, report);
    const auto& flows = report.result.flows;
    std::cout << "seed " << seed << ": " << flows.size() << " flows, avg fct "
              << flowcut::MeanFctNanos(flows) << " ns, p99 fct "
              << flowcut::P99FctNanos(flows) << " ns, ooo "
              << flowcut::OooFraction(flows) << " -> " << dir << "\n";
  }
  return kExitOk;
}

int Sweep(const std::string& path, const std::vector<std::string>& axis_specs,
          std::optional<uint64_t> seed, const std::string& out, unsigned jobs) {
  std::vector<flowcut::SweepAxis> axes;
  for (const std::string& spec : axis_specs) axes.push_back(flowcut::ParseSweepAxis(spec));
  YAML::Node base = flowcut::LoadConfigNode(path);
  if (seed) flowcut::ApplyOverride(base, "seeds", "[" + std::to_string(*seed) + "]");
  flowcut::SweepPlan plan = flowcut::PlanSweep(base, ParentDir(path), axes);
  const std::string root = out.empty() ? plan.cells.front().output : out;
  const std::vector<flowcut::SweepRow> rows = flowcut::RunSweep(plan, jobs);
  std::filesystem::create_directories(root);
  const std::string csv = (std::filesystem::path(root) / "sweep.csv").string();
  std::ofstream f(csv);
  if (!f) throw std::runtime_error("cannot write " + csv);
  flowcut::WriteSweepCsv(f, axes, rows);
  std::cout << plan.cells.size() << " cells, " << rows.size() << " runs -> " << csv << "\n";
  return kExitOk;
}

std::vector<double> ParseList(const std::string& name, const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--" + name + ": malformed number '" + item + "'");
    }
  }
  if (values.empty()) throw ConfigError("--" + name + ": no values");
  return values;
}

struct ModelArgs {
  std::string hosts = "1024";
  std::string flows_per_host = "1";
  std::string gbps = "200";
  std::string latency_us = "5";
  std::string mtu = "2048";
  std::string per_flow_bytes = "11";
  std::string out;
};

int Model(const std::string& what, const ModelArgs& a) {
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw std::runtime_error("cannot write " + a.out);
  }
  std::ostream& out = a.out.empty() ? std::cout : file;
  if (what == "ack-overhead") {
    out << "mtu_bytes,ack_overhead\n";
    for (double m : ParseList("mtu", a.mtu)) {
      out << m << ',' << flowcut::AckOverhead(m) << '\n';
    }
    return kExitOk;
  }
  std::vector<flowcut::ResourceModelInputs> rows;
  for (double h : ParseList("hosts", a.hosts))
    for (double f : ParseList("flows-per-host", a.flows_per_host))
      for (double g : ParseList("gbps", a.gbps))
        for (double l : ParseList("latency-us", a.latency_us))
          for (double m : ParseList("mtu", a.mtu))
            for (double s : ParseList("per-flow-bytes", a.per_flow_bytes)) {
              flowcut::ResourceModelInputs in{h, f, g * 1e9, l * 1e-6, m, s};
              flowcut::ValidateModelInputs(in);
              rows.push_back(in);
            }
  flowcut::WriteModelCsv(out, rows);
  return kExitOk;
}

int ExportTopology(const flowcut::ExperimentConfig& cfg, const std::string& out) {
  const flowcut::Topology topo = flowcut::BuildTopology(cfg, cfg.seeds.front());
  if (out.empty()) {
    topo.ExportEdgeList(std::cout);
    return kExitOk;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  topo.ExportEdgeList(f);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Packet-level data center network simulator"};
  app.require_subcommand(1);

  std::string config;
  std::optional<uint64_t> seed;
  std::string out;
  bool trace = false;
  bool check = false;

  CLI::App* run = app.add_subcommand("run", "Run one simulation per configured seed");
  run->add_option("config", config, "Experiment YAML file")->required();
  run->add_option("--seed", seed, "Run only this seed");
  run->add_option("--out", out, "Output directory");
  run->add_flag("--trace", trace, "Write per-hop trace.txt");
  run->add_flag("--check-invariants", check, "Verify conservation at every event");

  std::vector<std::string> axes;
  unsigned jobs = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "Run the Cartesian product of axes");
  sweep->add_option("config", config, "Base experiment YAML file")->required();
  sweep->add_option("--axis", axes, "name=v1,v2,... (repeatable)")->required();
  sweep->add_option("--seed", seed, "Run only this seed");
  sweep->add_option("--out", out, "Output directory for sweep.csv");
  sweep->add_option("--jobs", jobs, "Parallel runs (default: processors)");

  std::string model_what;
  ModelArgs margs;
  CLI::App* model = app.add_subcommand("model", "Analytic switch resource model");
  model->add_option("what", model_what, "memory | active-flows | ack-overhead")
      ->required()
      ->check(CLI::IsMember({"memory", "active-flows", "ack-overhead"}));
  model->add_option("--hosts", margs.hosts, "H, comma list");
  model->add_option("--flows-per-host", margs.flows_per_host, "f, comma list");
  model->add_option("--gbps", margs.gbps, "B in Gb/s, comma list");
  model->add_option("--latency-us", margs.latency_us, "l in microseconds, comma list");
  model->add_option("--mtu", margs.mtu, "M in bytes, comma list");
  model->add_option("--per-flow-bytes", margs.per_flow_bytes, "state bytes per flow");
  model->add_option("--out", margs.out, "CSV file (default stdout)");

  CLI::App* export_topo = app.add_subcommand("export-topology", "Write the link edge list");
  export_topo->add_option("config", config, "Experiment YAML file")->required();
  export_topo->add_option("--seed", seed, "Seed for failure injection");
  export_topo->add_option("--out", out, "Edge list file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return Run(Load(config, seed, out, trace, check));
    if (*sweep) return Sweep(config, axes, seed, out, jobs);
    if (*model) return Model(model_what, margs);
    if (*export_topo) return ExportTopology(Load(config, seed, "", false, false), out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const flowcut::DeadlockError& e) {
    std::cerr << "deadlock: " << e.what() << "\n";
    return kExitRun;
  } catch (const flowcut::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitRun;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
