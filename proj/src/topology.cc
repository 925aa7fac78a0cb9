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

#include "flowcut/topology.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "flowcut/packet.h"
#include "flowcut/random.h"

namespace flowcut {

const char* NodeRoleName(NodeRole role) {
  switch (role) {
    case NodeRole::kHost: return "host";
    case NodeRole::kStar: return "switch";
    case NodeRole::kTor: return "tor";
    case NodeRole::kAggregation: return "agg";
    case NodeRole::kCore: return "core";
    case NodeRole::kDragonfly: return "sw";
  }
  return "?";
}

std::string Topology::NodeName(uint32_t id) const {
  const NodeInfo& n = nodes_[id];
  std::string name = NodeRoleName(n.role);
  if (n.role == NodeRole::kDragonfly) {
    return name + std::to_string(n.group) + "." + std::to_string(n.index);
  }
  return name + std::to_string(n.index);
}

uint32_t Topology::AddNode(NodeRole role, int pod, int group, int index) {
  NodeInfo n;
  n.role = role;
  n.pod = pod;
  n.group = group;
  n.index = index;
  nodes_.push_back(std::move(n));
  return static_cast<uint32_t>(nodes_.size() - 1);
}

void Topology::Connect(uint32_t a, uint32_t b, bool fabric, bool up_from_a,
                       bool global) {
  LinkSpec l;
  l.a = a;
  l.b = b;
  l.a_port = static_cast<uint32_t>(nodes_[a].ports.size());
  l.b_port = static_cast<uint32_t>(nodes_[b].ports.size());
  l.bits_per_second = link_defaults_.bits_per_second;
  l.latency = link_defaults_.latency;
  l.fabric = fabric;
  const uint32_t idx = static_cast<uint32_t>(links_.size());
  links_.push_back(l);

  PortInfo pa;
  pa.peer_node = b;
  pa.peer_port = l.b_port;
  pa.link = idx;
  pa.to_host = IsHost(b);
  pa.up = up_from_a;
  pa.global = global;
  nodes_[a].ports.push_back(pa);

  PortInfo pb;
  pb.peer_node = a;
  pb.peer_port = l.a_port;
  pb.link = idx;
  pb.to_host = IsHost(a);
  pb.up = false;
  pb.global = global;
  nodes_[b].ports.push_back(pb);
}

Topology Topology::Star(int hosts, LinkDefaults link) {
  if (hosts < 1) throw ConfigError("star topology needs at least one host");
  Topology t;
  t.kind_ = TopologyKind::kStar;
  t.link_defaults_ = link;
  t.num_hosts_ = static_cast<uint32_t>(hosts);
  for (int h = 0; h < hosts; ++h) t.AddNode(NodeRole::kHost, -1, -1, h);
  const uint32_t sw = t.AddNode(NodeRole::kStar, 0, -1, 0);
  for (int h = 0; h < hosts; ++h) {
    t.Connect(sw, static_cast<uint32_t>(h), false, false, false);
  }
  t.BuildShortestPathTables();
  return t;
}

Topology Topology::FatTree(const FatTreeParams& in, LinkDefaults link) {
  FatTreeParams p = in;
  if (p.pods < 1 || p.hosts_per_tor < 1) {
    throw ConfigError("fat tree: pods and hosts_per_tor must be >= 1");
  }
  if (p.tors_per_pod == 0) p.tors_per_pod = std::max(1, p.pods / 2);
  if (p.aggs_per_pod == 0) p.aggs_per_pod = std::max(1, p.pods / 2);
  if (p.cores == 0) p.cores = p.aggs_per_pod * p.aggs_per_pod;
  const int T = p.tors_per_pod;
  const int A = p.aggs_per_pod;
  if (T < 1 || A < 1 || p.cores < 1) {
    throw ConfigError("fat tree: switch counts must be >= 1");
  }
  if (p.taper < 1 || p.hosts_per_tor % p.taper != 0) {
    throw ConfigError("fat tree: taper " + std::to_string(p.taper) +
                      " does not divide hosts_per_tor " +
                      std::to_string(p.hosts_per_tor));
  }
  const int tor_uplinks = p.hosts_per_tor / p.taper;
  if (tor_uplinks % A != 0) {
    throw ConfigError("fat tree: " + std::to_string(tor_uplinks) +
                      " ToR uplinks cannot be spread evenly over " +
                      std::to_string(A) + " aggregation switches");
  }
  if ((T * p.hosts_per_tor) % A != 0) {
    throw ConfigError("fat tree: aggregation uplink count is not integral");
  }
  const int agg_up = T * p.hosts_per_tor / A;
  if (p.cores % A != 0) {
    throw ConfigError("fat tree: cores (" + std::to_string(p.cores) +
                      ") must be a multiple of aggs_per_pod (" +
                      std::to_string(A) + ")");
  }
  const int cores_per_group = p.cores / A;
  if (agg_up % cores_per_group != 0) {
    throw ConfigError("fat tree: " + std::to_string(agg_up) +
                      " aggregation uplinks cannot be spread over " +
                      std::to_string(cores_per_group) + " core switches");
  }
  const int tor_agg_links = tor_uplinks / A;
  const int agg_core_links = agg_up / cores_per_group;

  Topology t;
  t.kind_ = TopologyKind::kFatTree;
  t.link_defaults_ = link;
  const int num_tors = p.pods * T;
  t.num_hosts_ = static_cast<uint32_t>(num_tors * p.hosts_per_tor);
  for (uint32_t h = 0; h < t.num_hosts_; ++h) {
    t.AddNode(NodeRole::kHost, static_cast<int>(h) / (T * p.hosts_per_tor), -1,
              static_cast<int>(h));
  }
  std::vector<uint32_t> tors, aggs, cores;
  for (int i = 0; i < num_tors; ++i) {
    tors.push_back(t.AddNode(NodeRole::kTor, i / T, -1, i));
  }
  for (int i = 0; i < p.pods * A; ++i) {
    aggs.push_back(t.AddNode(NodeRole::kAggregation, i / A, -1, i));
  }
  for (int i = 0; i < p.cores; ++i) {
    cores.push_back(t.AddNode(NodeRole::kCore, -1, -1, i));
  }
  for (uint32_t h = 0; h < t.num_hosts_; ++h) {
    t.Connect(tors[h / p.hosts_per_tor], h, false, false, false);
  }
  for (int tor = 0; tor < num_tors; ++tor) {
    const int pod = tor / T;
    for (int a = 0; a < A; ++a) {
      for (int k = 0; k < tor_agg_links; ++k) {
        t.Connect(tors[tor], aggs[pod * A + a], true, true, false);
      }
    }
  }
  for (int pod = 0; pod < p.pods; ++pod) {
    for (int a = 0; a < A; ++a) {
      for (int c = 0; c < cores_per_group; ++c) {
        for (int k = 0; k < agg_core_links; ++k) {
          t.Connect(aggs[pod * A + a], cores[a * cores_per_group + c], true,
                    true, false);
        }
      }
    }
  }
  t.BuildShortestPathTables();
  return t;
}

Topology Topology::Dragonfly(const DragonflyParams& p, LinkDefaults link) {
  if (p.groups < 1 || p.switches_per_group < 1 || p.hosts_per_switch < 1) {
    throw ConfigError("dragonfly: counts must be >= 1");
  }
  if (p.groups > 1 && p.global_links_per_group_pair < 1) {
    throw ConfigError("dragonfly: groups must be connected by >= 1 link");
  }
  const int S = p.switches_per_group;
  const int globals_per_group = (p.groups - 1) * p.global_links_per_group_pair;
  const int globals_per_switch = (globals_per_group + S - 1) / S;
  const int ports_needed = p.hosts_per_switch + (S - 1) + globals_per_switch;
  if (ports_needed > p.radix) {
    throw ConfigError("dragonfly: switch needs " +
                      std::to_string(ports_needed) + " ports (" +
                      std::to_string(p.hosts_per_switch) + " host + " +
                      std::to_string(S - 1) + " local + " +
                      std::to_string(globals_per_switch) +
                      " global) but radix is " + std::to_string(p.radix));
  }

  Topology t;
  t.kind_ = TopologyKind::kDragonfly;
  t.link_defaults_ = link;
  t.num_groups_ = p.groups;
  t.num_hosts_ = static_cast<uint32_t>(p.groups * S * p.hosts_per_switch);
  for (uint32_t h = 0; h < t.num_hosts_; ++h) {
    t.AddNode(NodeRole::kHost, -1,
              static_cast<int>(h) / (S * p.hosts_per_switch),
              static_cast<int>(h));
  }
  std::vector<uint32_t> sw;
  for (int g = 0; g < p.groups; ++g) {
    for (int i = 0; i < S; ++i) sw.push_back(t.AddNode(NodeRole::kDragonfly, -1, g, i));
  }
  for (uint32_t h = 0; h < t.num_hosts_; ++h) {
    t.Connect(sw[h / p.hosts_per_switch], h, false, false, false);
  }
  for (int g = 0; g < p.groups; ++g) {
    for (int i = 0; i < S; ++i) {
      for (int j = i + 1; j < S; ++j) {
        t.Connect(sw[g * S + i], sw[g * S + j], true, false, false);
      }
    }
  }
  // Global links: the k-th global link of a group lands on switch k mod S.
  std::vector<int> next_slot(p.groups, 0);
  for (int g1 = 0; g1 < p.groups; ++g1) {
    for (int g2 = g1 + 1; g2 < p.groups; ++g2) {
      for (int l = 0; l < p.global_links_per_group_pair; ++l) {
        const int s1 = next_slot[g1]++ % S;
        const int s2 = next_slot[g2]++ % S;
        t.Connect(sw[g1 * S + s1], sw[g2 * S + s2], true, false, true);
      }
    }
  }
  t.BuildDragonflyTables(p);
  return t;
}

void Topology::BuildShortestPathTables() {
  const uint32_t nsw = num_switches();
  next_hops_.assign(nsw, std::vector<std::vector<uint32_t>>(nsw));
  for (uint32_t d = 0; d < nsw; ++d) {
    std::vector<int> dist(nsw, -1);
    std::deque<uint32_t> frontier{d};
    dist[d] = 0;
    while (!frontier.empty()) {
      const uint32_t s = frontier.front();
      frontier.pop_front();
      for (const PortInfo& port : nodes_[num_hosts_ + s].ports) {
        if (port.to_host) continue;
        const uint32_t n = port.peer_node - num_hosts_;
        if (dist[n] < 0) {
          dist[n] = dist[s] + 1;
          frontier.push_back(n);
        }
      }
    }
    for (uint32_t s = 0; s < nsw; ++s) {
      if (s == d || dist[s] < 0) continue;
      const auto& ports = nodes_[num_hosts_ + s].ports;
      for (uint32_t p = 0; p < ports.size(); ++p) {
        if (ports[p].to_host) continue;
        if (dist[ports[p].peer_node - num_hosts_] == dist[s] - 1) {
          next_hops_[s][d].push_back(p);
        }
      }
    }
  }
  host_switch_.resize(num_hosts_);
  host_switch_port_.resize(num_hosts_);
  host_port_single_.resize(num_hosts_);
  for (uint32_t h = 0; h < num_hosts_; ++h) {
    const PortInfo& up = nodes_[h].ports.at(0);
    host_switch_[h] = up.peer_node;
    host_switch_port_[h] = up.peer_port;
    host_port_single_[h] = {up.peer_port};
  }
}

void Topology::BuildDragonflyTables(const DragonflyParams& p) {
  const uint32_t nsw = num_switches();
  to_group_.assign(nsw, std::vector<std::vector<uint32_t>>(p.groups));
  next_hops_.assign(nsw, std::vector<std::vector<uint32_t>>(nsw));
  // owners[g][target] = switches of group g holding a global link to target.
  std::vector<std::vector<std::vector<uint32_t>>> owners(
      p.groups, std::vector<std::vector<uint32_t>>(p.groups));
  for (uint32_t s = 0; s < nsw; ++s) {
    const NodeInfo& n = nodes_[num_hosts_ + s];
    for (const PortInfo& port : n.ports) {
      if (!port.global) continue;
      const int tg = nodes_[port.peer_node].group;
      auto& v = owners[n.group][tg];
      if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
    }
  }
  for (uint32_t s = 0; s < nsw; ++s) {
    const NodeInfo& n = nodes_[num_hosts_ + s];
    for (int g = 0; g < p.groups; ++g) {
      if (g == n.group) continue;
      auto& out = to_group_[s][g];
      for (uint32_t port = 0; port < n.ports.size(); ++port) {
        const PortInfo& pi = n.ports[port];
        if (pi.global && nodes_[pi.peer_node].group == g) out.push_back(port);
      }
      if (!out.empty()) continue;
      for (uint32_t owner : owners[n.group][g]) {
        for (uint32_t port = 0; port < n.ports.size(); ++port) {
          const PortInfo& pi = n.ports[port];
          if (!pi.global && !pi.to_host && pi.peer_node == num_hosts_ + owner) {
            out.push_back(port);
            break;
          }
        }
      }
    }
    for (uint32_t d = 0; d < nsw; ++d) {
      if (d == s) continue;
      const int dg = nodes_[num_hosts_ + d].group;
      if (dg != n.group) {
        next_hops_[s][d] = to_group_[s][dg];
        continue;
      }
      for (uint32_t port = 0; port < n.ports.size(); ++port) {
        const PortInfo& pi = n.ports[port];
        if (!pi.global && pi.peer_node == num_hosts_ + d) {
          next_hops_[s][d].push_back(port);
        }
      }
    }
  }
  host_switch_.resize(num_hosts_);
  host_switch_port_.resize(num_hosts_);
  host_port_single_.resize(num_hosts_);
  for (uint32_t h = 0; h < num_hosts_; ++h) {
    const PortInfo& up = nodes_[h].ports.at(0);
    host_switch_[h] = up.peer_node;
    host_switch_port_[h] = up.peer_port;
    host_port_single_[h] = {up.peer_port};
  }
}

std::span<const uint32_t> Topology::Candidates(uint32_t sw, uint32_t dst_host,
                                               int target_group) const {
  const uint32_t s = sw - num_hosts_;
  if (kind_ == TopologyKind::kDragonfly && target_group >= 0 &&
      target_group != nodes_[sw].group) {
    return to_group_[s][target_group];
  }
  const uint32_t dst_sw = host_switch_[dst_host];
  if (dst_sw == sw) return host_port_single_[dst_host];
  return next_hops_[s][dst_sw - num_hosts_];
}

int Topology::PathSwitchHops(uint32_t sw, uint32_t dst_host,
                             int via_group) const {
  uint32_t cur = sw;
  bool reached = via_group < 0;
  for (int hops = 0; hops < 32; ++hops) {
    if (!reached && nodes_[cur].group == via_group) reached = true;
    const int target = reached ? -1 : via_group;
    if (target < 0 && cur == host_switch_[dst_host]) return hops;
    auto c = Candidates(cur, dst_host, target);
    if (c.empty()) return std::numeric_limits<int>::max() / 4;
    cur = nodes_[cur].ports[c[0]].peer_node;
  }
  return std::numeric_limits<int>::max() / 4;
}

SimTime Topology::BaseRtt(int64_t mtu_bytes) const {
  int diameter = 0;
  for (uint32_t s = num_hosts_; s < num_nodes(); ++s) {
    for (uint32_t h = 0; h < num_hosts_; ++h) {
      diameter = std::max(diameter, PathSwitchHops(s, h, -1));
    }
  }
  const int links = diameter + 2;
  const SimTime lat = link_defaults_.latency;
  const int64_t bps = link_defaults_.bits_per_second;
  return links * (lat + SerializationTime(mtu_bytes, bps)) +
         links * (lat + SerializationTime(kNicAckWireBytes, bps));
}

int Topology::HostTor(uint32_t host) const {
  if (kind_ != TopologyKind::kFatTree) return -1;
  return nodes_[host_switch_[host]].index;
}

void Topology::ExportEdgeList(std::ostream& out) const {
  out << "# node_a node_b bits_per_second latency_ns\n";
  for (const LinkSpec& l : links_) {
    out << NodeName(l.a) << ' ' << NodeName(l.b) << ' ' << l.bits_per_second
        << ' ' << ToWholeNanos(l.latency) << '\n';
  }
}

Topology InjectFailures(const Topology& topology, const FailurePlan& plan) {
  if (plan.fraction < 0.0 || plan.fraction > 1.0) {
    throw ConfigError("failure fraction must lie in [0, 1]");
  }
  if (plan.degrade_factor < 1) {
    throw ConfigError("failure degrade_factor must be >= 1");
  }
  Topology out = topology;
  if (plan.fraction == 0.0) return out;
  std::vector<size_t> fabric;
  for (size_t i = 0; i < out.links().size(); ++i) {
    if (out.links()[i].fabric) fabric.push_back(i);
  }
  size_t count = static_cast<size_t>(
      std::llround(plan.fraction * static_cast<double>(fabric.size())));
  if (count == 0 && !fabric.empty()) count = 1;
  count = std::min(count, fabric.size());
  Rng rng(plan.seed);
  for (size_t i = 0; i < count; ++i) {
    const size_t j = i + rng.UniformInt(fabric.size() - i);
    std::swap(fabric[i], fabric[j]);
    LinkSpec& l = out.mutable_link(fabric[i]);
    l.bits_per_second = std::max<int64_t>(1, l.bits_per_second / plan.degrade_factor);
    l.degraded = true;
  }
  return out;
}

}  // namespace flowcut
