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

#include "flowcut/config.h"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "flowcut/link.h"

namespace flowcut {

namespace {

void CheckKeys(const YAML::Node& node, const std::string& path,
               std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigError(path + ": expected a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!ok.count(key)) {
      throw ConfigError("unknown key '" + (path.empty() ? key : path + "." + key) + "'");
    }
  }
}

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

template <typename T>
T Get(const YAML::Node& parent, const std::string& path, const char* key, T fallback) {
  const YAML::Node n = parent[key];
  if (!n.IsDefined() || n.IsNull()) return fallback;
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(Join(path, key) + ": malformed value '" +
                      (n.IsScalar() ? n.Scalar() : std::string("<non-scalar>")) + "'");
  }
}

int GetPositiveInt(const YAML::Node& parent, const std::string& path, const char* key,
                   int fallback, int min = 1) {
  const int v = Get<int>(parent, path, key, fallback);
  if (v < min) {
    throw ConfigError(Join(path, key) + " must be >= " + std::to_string(min));
  }
  return v;
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

const char* TopologyKindName(TopologyKind k) {
  switch (k) {
    case TopologyKind::kStar: return "star";
    case TopologyKind::kFatTree: return "fat_tree";
    case TopologyKind::kDragonfly: return "dragonfly";
  }
  return "?";
}

void ParseTopology(const YAML::Node& n, TopologyConfig& t) {
  const std::string path = "topology";
  CheckKeys(n, path, {"kind", "link_gbps", "link_latency_ns", "fat_tree", "dragonfly", "star"});
  const std::string kind = Get<std::string>(n, path, "kind", "fat_tree");
  if (kind == "fat_tree") {
    t.kind = TopologyKind::kFatTree;
  } else if (kind == "dragonfly") {
    t.kind = TopologyKind::kDragonfly;
  } else if (kind == "star") {
    t.kind = TopologyKind::kStar;
  } else {
    throw ConfigError("topology.kind: expected fat_tree, dragonfly or star, got '" + kind + "'");
  }
  const double gbps = Get<double>(n, path, "link_gbps",
                                  static_cast<double>(t.link.bits_per_second) / 1e9);
  if (!(gbps > 0)) throw ConfigError("topology.link_gbps must be > 0");
  t.link.bits_per_second = std::llround(gbps * 1e9);
  const int64_t lat = Get<int64_t>(n, path, "link_latency_ns", ToWholeNanos(t.link.latency));
  if (lat < 0) throw ConfigError("topology.link_latency_ns must be >= 0");
  t.link.latency = Nanos(lat);
  if (const YAML::Node ft = n["fat_tree"]; ft.IsDefined()) {
    const std::string p = "topology.fat_tree";
    CheckKeys(ft, p, {"pods", "hosts_per_tor", "taper", "tors_per_pod", "aggs_per_pod", "cores"});
    t.fat_tree.pods = GetPositiveInt(ft, p, "pods", t.fat_tree.pods);
    t.fat_tree.hosts_per_tor = GetPositiveInt(ft, p, "hosts_per_tor", t.fat_tree.hosts_per_tor);
    t.fat_tree.taper = GetPositiveInt(ft, p, "taper", t.fat_tree.taper);
    t.fat_tree.tors_per_pod = GetPositiveInt(ft, p, "tors_per_pod", t.fat_tree.tors_per_pod, 0);
    t.fat_tree.aggs_per_pod = GetPositiveInt(ft, p, "aggs_per_pod", t.fat_tree.aggs_per_pod, 0);
    t.fat_tree.cores = GetPositiveInt(ft, p, "cores", t.fat_tree.cores, 0);
  }
  if (const YAML::Node df = n["dragonfly"]; df.IsDefined()) {
    const std::string p = "topology.dragonfly";
    CheckKeys(df, p, {"groups", "switches_per_group", "hosts_per_switch",
                      "global_links_per_group_pair", "radix"});
    auto& d = t.dragonfly;
    d.groups = GetPositiveInt(df, p, "groups", d.groups);
    d.switches_per_group = GetPositiveInt(df, p, "switches_per_group", d.switches_per_group);
    d.hosts_per_switch = GetPositiveInt(df, p, "hosts_per_switch", d.hosts_per_switch);
    d.global_links_per_group_pair =
        GetPositiveInt(df, p, "global_links_per_group_pair", d.global_links_per_group_pair);
    d.radix = GetPositiveInt(df, p, "radix", d.radix);
  }
  if (const YAML::Node st = n["star"]; st.IsDefined()) {
    CheckKeys(st, "topology.star", {"hosts"});
    t.star_hosts = GetPositiveInt(st, "topology.star", "hosts", t.star_hosts);
  }
}

void ParseRouting(const YAML::Node& n, ExperimentConfig& c) {
  const std::string path = "routing";
  CheckKeys(n, path, {"policy", "mode", "alpha", "rtt_ratio_threshold", "rtt_growth_threshold",
                      "flowlet_preset", "flowlet_timeout_ns", "flowcell_bytes",
                      "partial_resume_ood", "table_capacity", "resume_timeout",
                      "xon_loss_probability", "ack_loss_probability", "buffer_bytes", "mtu"});
  SimConfig& s = c.sim;
  const std::string policy = Get<std::string>(n, path, "policy", "ecmp");
  const auto parsed = ParsePolicy(policy);
  if (!parsed) throw ConfigError("routing.policy: unknown policy '" + policy + "'");
  s.policy = *parsed;
  const std::string mode = Get<std::string>(n, path, "mode", "switch");
  if (mode != "switch" && mode != "nic") {
    throw ConfigError("routing.mode: expected switch or nic, got '" + mode + "'");
  }
  s.nic_mode = mode == "nic";
  if (s.nic_mode && s.policy != RoutingPolicy::kFlowcut) {
    throw ConfigError("routing.mode: nic mode requires policy flowcut");
  }
  s.congestion.alpha = Get<double>(n, path, "alpha", s.congestion.alpha);
  s.congestion.rtt_ratio_threshold =
      Get<double>(n, path, "rtt_ratio_threshold", s.congestion.rtt_ratio_threshold);
  s.congestion.rtt_growth_threshold =
      Get<double>(n, path, "rtt_growth_threshold", s.congestion.rtt_growth_threshold);
  const std::string preset = Get<std::string>(n, path, "flowlet_preset", "balanced");
  const auto fp = ParseFlowletPreset(preset);
  if (!fp) {
    throw ConfigError("routing.flowlet_preset: expected best, balanced or lowest_ooo");
  }
  c.flowlet_preset = *fp;
  const int64_t fl = Get<int64_t>(n, path, "flowlet_timeout_ns", 0);
  if (fl < 0) throw ConfigError("routing.flowlet_timeout_ns must be >= 0");
  c.flowlet_timeout_override = Nanos(fl);
  s.flowcell_bytes = Get<int64_t>(n, path, "flowcell_bytes", s.flowcell_bytes);
  if (s.flowcell_bytes < 1) throw ConfigError("routing.flowcell_bytes must be >= 1");
  s.partial_resume_ood = GetPositiveInt(n, path, "partial_resume_ood", 0, 0);
  const int64_t cap = Get<int64_t>(n, path, "table_capacity",
                                   static_cast<int64_t>(s.table_capacity));
  if (cap < 1) throw ConfigError("routing.table_capacity must be >= 1");
  s.table_capacity = static_cast<size_t>(cap);
  const std::string timeout = Get<std::string>(n, path, "resume_timeout", "auto");
  if (timeout == "auto") {
    s.resume_timeout = -1;
  } else if (timeout == "none") {
    s.resume_timeout = 0;
  } else {
    const int64_t ns = Get<int64_t>(n, path, "resume_timeout", 0);
    if (ns <= 0) {
      throw ConfigError("routing.resume_timeout: expected auto, none or a positive ns count");
    }
    s.resume_timeout = Nanos(ns);
  }
  s.xon_loss_probability = Get<double>(n, path, "xon_loss_probability", 0.0);
  s.ack_loss_probability = Get<double>(n, path, "ack_loss_probability", 0.0);
  for (double p : {s.xon_loss_probability, s.ack_loss_probability}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("routing loss probabilities must lie in [0, 1]");
  }
  s.buffer_bytes = Get<int64_t>(n, path, "buffer_bytes", s.buffer_bytes);
  s.mtu = Get<int64_t>(n, path, "mtu", s.mtu);
  if (s.mtu <= kFlowcutHeaderBytes) throw ConfigError("routing.mtu is too small");
  if (s.buffer_bytes / kNumVirtualChannels < s.mtu) {
    throw ConfigError("routing.buffer_bytes must hold one mtu per virtual channel");
  }
}

void ParseWorkload(const YAML::Node& n, WorkloadConfig& w) {
  const std::string path = "workload";
  CheckKeys(n, path, {"kind", "message_bytes", "distribution", "flows_per_host", "window",
                      "exclude_same_tor", "flows"});
  const std::string kind = Get<std::string>(n, path, "kind", "permutation");
  if (kind == "permutation") {
    w.kind = WorkloadKind::kPermutation;
  } else if (kind == "all_to_all") {
    w.kind = WorkloadKind::kAllToAll;
  } else if (kind == "random_uniform") {
    w.kind = WorkloadKind::kRandomUniform;
  } else if (kind == "explicit") {
    w.kind = WorkloadKind::kExplicit;
  } else {
    throw ConfigError("workload.kind: expected permutation, all_to_all, random_uniform or "
                      "explicit, got '" + kind + "'");
  }
  w.message_bytes = Get<int64_t>(n, path, "message_bytes", w.message_bytes);
  if (w.message_bytes < 0) throw ConfigError("workload.message_bytes must be >= 0");
  w.distribution = Get<std::string>(n, path, "distribution", w.distribution);
  w.flows_per_host = GetPositiveInt(n, path, "flows_per_host", w.flows_per_host);
  w.window = GetPositiveInt(n, path, "window", w.window);
  w.exclude_same_tor = Get<bool>(n, path, "exclude_same_tor", w.exclude_same_tor);
  w.flows.clear();
  if (const YAML::Node flows = n["flows"]; flows.IsDefined() && !flows.IsNull()) {
    if (!flows.IsSequence()) throw ConfigError("workload.flows: expected a list");
    for (size_t i = 0; i < flows.size(); ++i) {
      const std::string p = "workload.flows[" + std::to_string(i) + "]";
      const YAML::Node f = flows[i];
      CheckKeys(f, p, {"src", "dst", "size", "start_ns", "after"});
      FlowSpec spec;
      spec.src = Get<uint32_t>(f, p, "src", 0);
      spec.dst = Get<uint32_t>(f, p, "dst", 0);
      spec.size = Get<int64_t>(f, p, "size", 0);
      spec.start = Nanos(Get<int64_t>(f, p, "start_ns", 0));
      spec.after = Get<int32_t>(f, p, "after", -1);
      if (spec.size < 0 || spec.start < 0) throw ConfigError(p + ": negative size or start");
      w.flows.push_back(spec);
    }
  }
  if (w.kind == WorkloadKind::kExplicit && w.flows.empty()) {
    throw ConfigError("workload.flows: explicit workload needs at least one flow");
  }
}

void ParseFailures(const YAML::Node& n, FailurePlan& f) {
  CheckKeys(n, "failures", {"fraction", "degrade_factor", "seed"});
  f.fraction = Get<double>(n, "failures", "fraction", f.fraction);
  f.degrade_factor = Get<int64_t>(n, "failures", "degrade_factor", f.degrade_factor);
  f.seed = Get<uint64_t>(n, "failures", "seed", f.seed);
  if (!(f.fraction >= 0.0 && f.fraction <= 1.0)) {
    throw ConfigError("failures.fraction must lie in [0, 1]");
  }
  if (f.degrade_factor < 1) throw ConfigError("failures.degrade_factor must be >= 1");
}

void SetPath(YAML::Node node, const std::vector<std::string>& parts, size_t i,
             const YAML::Node& value) {
  if (i + 1 == parts.size()) {
    node[parts[i]] = value;
    return;
  }
  SetPath(node[parts[i]], parts, i + 1, value);
}

}  // namespace

const char* WorkloadKindName(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::kPermutation: return "permutation";
    case WorkloadKind::kAllToAll: return "all_to_all";
    case WorkloadKind::kRandomUniform: return "random_uniform";
    case WorkloadKind::kExplicit: return "explicit";
  }
  return "?";
}

ExperimentConfig ParseConfig(const YAML::Node& root, const std::string& base_dir) {
  ExperimentConfig c;
  c.base_dir = base_dir;
  if (!root.IsDefined() || root.IsNull()) return c;
  CheckKeys(root, "", {"topology", "routing", "workload", "failures", "seeds", "output",
                       "trace", "check_invariants", "timeline_bucket_ns"});
  if (root["topology"]) ParseTopology(root["topology"], c.topology);
  if (root["routing"]) ParseRouting(root["routing"], c);
  if (root["workload"]) ParseWorkload(root["workload"], c.workload);
  if (root["failures"]) ParseFailures(root["failures"], c.failures);
  if (const YAML::Node seeds = root["seeds"]; seeds.IsDefined()) {
    c.seeds.clear();
    if (seeds.IsScalar()) {
      c.seeds.push_back(Get<uint64_t>(root, "", "seeds", 1));
    } else if (seeds.IsSequence()) {
      for (size_t i = 0; i < seeds.size(); ++i) {
        try {
          c.seeds.push_back(seeds[i].as<uint64_t>());
        } catch (const YAML::Exception&) {
          throw ConfigError("seeds[" + std::to_string(i) + "]: expected an unsigned integer");
        }
      }
    }
    if (c.seeds.empty()) throw ConfigError("seeds: at least one seed is required");
  }
  c.output = Get<std::string>(root, "", "output", c.output);
  c.trace = Get<bool>(root, "", "trace", c.trace);
  c.sim.check_invariants = Get<bool>(root, "", "check_invariants", false);
  const int64_t bucket = Get<int64_t>(root, "", "timeline_bucket_ns",
                                      ToWholeNanos(c.sim.timeline_bucket));
  if (bucket < 1) throw ConfigError("timeline_bucket_ns must be >= 1");
  c.sim.timeline_bucket = Nanos(bucket);
  c.sim.congestion.picos_per_byte = PicosPerByte(c.topology.link.bits_per_second);
  c.sim.congestion.Validate();
  c.sim.flowlet_timeout = c.flowlet_timeout_override > 0
                              ? c.flowlet_timeout_override
                              : FlowletPresetTimeout(c.flowlet_preset);
  return c;
}

ExperimentConfig ParseConfigText(const std::string& text, const std::string& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }
  return ParseConfig(root, base_dir);
}

YAML::Node LoadConfigNode(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return YAML::Load(in);
  } catch (const YAML::Exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ExperimentConfig LoadConfigFile(const std::string& path) {
  const std::filesystem::path p(path);
  const std::string dir = p.has_parent_path() ? p.parent_path().string() : ".";
  return ParseConfig(LoadConfigNode(path), dir);
}

std::string SerializeConfig(const ExperimentConfig& c) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "topology" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << TopologyKindName(c.topology.kind);
  e << YAML::Key << "link_gbps" << YAML::Value
    << FormatDouble(static_cast<double>(c.topology.link.bits_per_second) / 1e9);
  e << YAML::Key << "link_latency_ns" << YAML::Value << ToWholeNanos(c.topology.link.latency);
  const FatTreeParams& ft = c.topology.fat_tree;
  e << YAML::Key << "fat_tree" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "pods" << YAML::Value << ft.pods;
  e << YAML::Key << "hosts_per_tor" << YAML::Value << ft.hosts_per_tor;
  e << YAML::Key << "taper" << YAML::Value << ft.taper;
  e << YAML::Key << "tors_per_pod" << YAML::Value << ft.tors_per_pod;
  e << YAML::Key << "aggs_per_pod" << YAML::Value << ft.aggs_per_pod;
  e << YAML::Key << "cores" << YAML::Value << ft.cores;
  e << YAML::EndMap;
  const DragonflyParams& df = c.topology.dragonfly;
  e << YAML::Key << "dragonfly" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "groups" << YAML::Value << df.groups;
  e << YAML::Key << "switches_per_group" << YAML::Value << df.switches_per_group;
  e << YAML::Key << "hosts_per_switch" << YAML::Value << df.hosts_per_switch;
  e << YAML::Key << "global_links_per_group_pair" << YAML::Value << df.global_links_per_group_pair;
  e << YAML::Key << "radix" << YAML::Value << df.radix;
  e << YAML::EndMap;
  e << YAML::Key << "star" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "hosts" << YAML::Value << c.topology.star_hosts;
  e << YAML::EndMap;
  e << YAML::EndMap;

  const SimConfig& s = c.sim;
  e << YAML::Key << "routing" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "policy" << YAML::Value << std::string(PolicyName(s.policy));
  e << YAML::Key << "mode" << YAML::Value << (s.nic_mode ? "nic" : "switch");
  e << YAML::Key << "alpha" << YAML::Value << FormatDouble(s.congestion.alpha);
  e << YAML::Key << "rtt_ratio_threshold" << YAML::Value
    << FormatDouble(s.congestion.rtt_ratio_threshold);
  e << YAML::Key << "rtt_growth_threshold" << YAML::Value
    << FormatDouble(s.congestion.rtt_growth_threshold);
  e << YAML::Key << "flowlet_preset" << YAML::Value
    << std::string(FlowletPresetName(c.flowlet_preset));
  e << YAML::Key << "flowlet_timeout_ns" << YAML::Value << ToWholeNanos(c.flowlet_timeout_override);
  e << YAML::Key << "flowcell_bytes" << YAML::Value << s.flowcell_bytes;
  e << YAML::Key << "partial_resume_ood" << YAML::Value << s.partial_resume_ood;
  e << YAML::Key << "table_capacity" << YAML::Value << static_cast<uint64_t>(s.table_capacity);
  e << YAML::Key << "resume_timeout" << YAML::Value;
  if (s.resume_timeout < 0) {
    e << "auto";
  } else if (s.resume_timeout == 0) {
    e << "none";
  } else {
    e << ToWholeNanos(s.resume_timeout);
  }
  e << YAML::Key << "xon_loss_probability" << YAML::Value << FormatDouble(s.xon_loss_probability);
  e << YAML::Key << "ack_loss_probability" << YAML::Value << FormatDouble(s.ack_loss_probability);
  e << YAML::Key << "buffer_bytes" << YAML::Value << s.buffer_bytes;
  e << YAML::Key << "mtu" << YAML::Value << s.mtu;
  e << YAML::EndMap;

  const WorkloadConfig& w = c.workload;
  e << YAML::Key << "workload" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << WorkloadKindName(w.kind);
  e << YAML::Key << "message_bytes" << YAML::Value << w.message_bytes;
  e << YAML::Key << "distribution" << YAML::Value << w.distribution;
  e << YAML::Key << "flows_per_host" << YAML::Value << w.flows_per_host;
  e << YAML::Key << "window" << YAML::Value << w.window;
  e << YAML::Key << "exclude_same_tor" << YAML::Value << w.exclude_same_tor;
  e << YAML::Key << "flows" << YAML::Value << YAML::BeginSeq;
  for (const FlowSpec& f : w.flows) {
    e << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "src" << YAML::Value << f.src;
    e << YAML::Key << "dst" << YAML::Value << f.dst;
    e << YAML::Key << "size" << YAML::Value << f.size;
    e << YAML::Key << "start_ns" << YAML::Value << ToWholeNanos(f.start);
    e << YAML::Key << "after" << YAML::Value << f.after;
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;
  e << YAML::EndMap;

  e << YAML::Key << "failures" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "fraction" << YAML::Value << FormatDouble(c.failures.fraction);
  e << YAML::Key << "degrade_factor" << YAML::Value << c.failures.degrade_factor;
  e << YAML::Key << "seed" << YAML::Value << c.failures.seed;
  e << YAML::EndMap;

  e << YAML::Key << "seeds" << YAML::Value << YAML::Flow << c.seeds;
  e << YAML::Key << "output" << YAML::Value << c.output;
  e << YAML::Key << "trace" << YAML::Value << c.trace;
  e << YAML::Key << "check_invariants" << YAML::Value << s.check_invariants;
  e << YAML::Key << "timeline_bucket_ns" << YAML::Value << ToWholeNanos(s.timeline_bucket);
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

void ApplyOverride(YAML::Node& root, const std::string& dotted_path,
                   const std::string& value) {
  std::vector<std::string> parts;
  std::stringstream ss(dotted_path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ConfigError("malformed override path '" + dotted_path + "'");
    parts.push_back(part);
  }
  if (parts.empty()) throw ConfigError("empty override path");
  YAML::Node parsed;
  try {
    parsed = YAML::Load(value);
  } catch (const YAML::Exception&) {
    throw ConfigError("override " + dotted_path + ": malformed value '" + value + "'");
  }
  SetPath(root, parts, 0, parsed);
}

std::string BundledDataDir() {
#ifdef FLOWCUT_DATA_DIR
  return FLOWCUT_DATA_DIR;
#else
  return "data/cdf";
#endif
}

std::string ResolveDistributionPath(const ExperimentConfig& config) {
  const std::string& d = config.workload.distribution;
  const bool is_path = d.find('/') != std::string::npos ||
                       (d.size() > 4 && d.compare(d.size() - 4, 4, ".cdf") == 0);
  if (!is_path) return BundledDataDir() + "/" + d + ".cdf";
  const std::filesystem::path p(d);
  if (p.is_absolute()) return d;
  return (std::filesystem::path(config.base_dir) / p).string();
}

}  // namespace flowcut
