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

#ifndef FLOWCUT_TOPOLOGY_H_
#define FLOWCUT_TOPOLOGY_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowcut/sim_time.h"

namespace flowcut {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TopologyKind : uint8_t { kStar, kFatTree, kDragonfly };
enum class NodeRole : uint8_t { kHost, kStar, kTor, kAggregation, kCore, kDragonfly };

const char* NodeRoleName(NodeRole role);

struct PortInfo {
  uint32_t peer_node = 0;
  uint32_t peer_port = 0;
  uint32_t link = 0;  // physical link index
  bool to_host = false;
  bool up = false;      // fat tree: leads one level up
  bool global = false;  // dragonfly: inter-group link
};

struct NodeInfo {
  NodeRole role = NodeRole::kHost;
  int pod = -1;    // fat tree
  int group = -1;  // dragonfly
  int index = 0;   // index within its role
  std::vector<PortInfo> ports;
};

// Bidirectional physical link.
struct LinkSpec {
  uint32_t a = 0;
  uint32_t a_port = 0;
  uint32_t b = 0;
  uint32_t b_port = 0;
  int64_t bits_per_second = 0;
  SimTime latency = 0;
  bool fabric = false;  // switch-to-switch
  bool degraded = false;
};

struct LinkDefaults {
  int64_t bits_per_second = 200'000'000'000;
  SimTime latency = Micros(1);
  friend bool operator==(const LinkDefaults&, const LinkDefaults&) = default;
};

struct FatTreeParams {
  int pods = 4;
  int hosts_per_tor = 8;
  int taper = 1;          // 1 => 1:1, 2 => 2:1 at the ToR level
  int tors_per_pod = 0;   // 0 => pods / 2
  int aggs_per_pod = 0;   // 0 => pods / 2
  int cores = 0;          // 0 => (pods / 2)^2
  friend bool operator==(const FatTreeParams&, const FatTreeParams&) = default;
};

struct DragonflyParams {
  int groups = 4;
  int switches_per_group = 4;
  int hosts_per_switch = 4;
  int global_links_per_group_pair = 4;
  int radix = 64;
  friend bool operator==(const DragonflyParams&, const DragonflyParams&) = default;
};

struct FailurePlan {
  uint64_t seed = 1;
  double fraction = 0.0;
  int64_t degrade_factor = 10;
  friend bool operator==(const FailurePlan&, const FailurePlan&) = default;
};

// Immutable node/link graph plus precomputed candidate output ports.
// Hosts occupy node ids [0, num_hosts()); switches follow.
class Topology {
 public:
  static Topology Star(int hosts, LinkDefaults link = {});
  static Topology FatTree(const FatTreeParams& params, LinkDefaults link = {});
  static Topology Dragonfly(const DragonflyParams& params,
                            LinkDefaults link = {});

  TopologyKind kind() const { return kind_; }
  uint32_t num_hosts() const { return num_hosts_; }
  uint32_t num_nodes() const { return static_cast<uint32_t>(nodes_.size()); }
  uint32_t num_switches() const { return num_nodes() - num_hosts_; }
  bool IsHost(uint32_t node) const { return node < num_hosts_; }
  const NodeInfo& node(uint32_t id) const { return nodes_[id]; }
  const std::vector<LinkSpec>& links() const { return links_; }
  LinkSpec& mutable_link(size_t i) { return links_[i]; }
  std::string NodeName(uint32_t id) const;

  // Switch the host is attached to, and the switch port facing it.
  uint32_t HostSwitch(uint32_t host) const { return host_switch_[host]; }
  uint32_t HostSwitchPort(uint32_t host) const { return host_switch_port_[host]; }
  int HostPod(uint32_t host) const { return nodes_[host_switch_[host]].pod; }
  int HostGroup(uint32_t host) const { return nodes_[host_switch_[host]].group; }
  int num_groups() const { return num_groups_; }

  // Candidate output ports at switch `sw` for a packet to `dst_host`.
  // `target_group` is the Dragonfly group the packet is currently heading
  // to (an intermediate group, or -1 for the destination's group).
  std::span<const uint32_t> Candidates(uint32_t sw, uint32_t dst_host,
                                       int target_group = -1) const;

  // Switch-to-switch hops of the path obtained by always taking the first
  // candidate, optionally detouring through `via_group`.
  int PathSwitchHops(uint32_t sw, uint32_t dst_host, int via_group) const;

  // Shortest round trip (data to egress switch and ACK back) on an idle
  // network for an MTU packet, over the longest minimal host pair.
  SimTime BaseRtt(int64_t mtu_bytes) const;

  int64_t link_bits_per_second() const { return link_defaults_.bits_per_second; }
  SimTime link_latency() const { return link_defaults_.latency; }

  // One line per link: "<node_a> <node_b> <bits_per_second> <latency_ns>".
  void ExportEdgeList(std::ostream& out) const;

  // Fat-tree ToR index of a host; -1 for other topologies.
  int HostTor(uint32_t host) const;

 private:
  uint32_t AddNode(NodeRole role, int pod, int group, int index);
  void Connect(uint32_t a, uint32_t b, bool fabric, bool up_from_a,
               bool global);
  void BuildShortestPathTables();
  void BuildDragonflyTables(const DragonflyParams& p);

  TopologyKind kind_ = TopologyKind::kStar;
  uint32_t num_hosts_ = 0;
  int num_groups_ = 0;
  LinkDefaults link_defaults_;
  std::vector<NodeInfo> nodes_;
  std::vector<LinkSpec> links_;
  std::vector<uint32_t> host_switch_;
  std::vector<uint32_t> host_switch_port_;
  // [switch - num_hosts][dest switch - num_hosts] -> ports (minimal).
  std::vector<std::vector<std::vector<uint32_t>>> next_hops_;
  // Dragonfly: [switch - num_hosts][group] -> ports leaving towards group.
  std::vector<std::vector<std::vector<uint32_t>>> to_group_;
  std::vector<std::vector<uint32_t>> host_port_single_;  // per host: {port}
};

// Returns a copy with `plan.fraction` of fabric links slowed down by
// `plan.degrade_factor`. Host links are never touched.
Topology InjectFailures(const Topology& topology, const FailurePlan& plan);

}  // namespace flowcut

#endif  // FLOWCUT_TOPOLOGY_H_
