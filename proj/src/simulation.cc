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

#include "flowcut/simulation.h"

#include <algorithm>
#include <array>
#include <deque>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>

#include "flowcut/event_queue.h"
#include "flowcut/flowcut_table.h"
#include "flowcut/link.h"
#include "flowcut/packet.h"
#include "flowcut/random.h"

namespace flowcut {

const char* TraceKindName(TraceKind kind) {
  switch (kind) {
    case TraceKind::kInject: return "inject";
    case TraceKind::kArrive: return "arrive";
    case TraceKind::kDepart: return "depart";
    case TraceKind::kDeliver: return "deliver";
    case TraceKind::kFlowcutStart: return "flowcut_start";
    case TraceKind::kFlowcutEnd: return "flowcut_end";
    case TraceKind::kXoff: return "xoff";
    case TraceKind::kXon: return "xon";
  }
  return "?";
}

namespace {

const char* PacketTypeName(PacketType t) {
  switch (t) {
    case PacketType::kData: return "data";
    case PacketType::kAck: return "ack";
    case PacketType::kXoff: return "xoff";
    case PacketType::kXon: return "xon";
    case PacketType::kNicAck: return "nic_ack";
  }
  return "?";
}

constexpr uint32_t kNone = std::numeric_limits<uint32_t>::max();
constexpr uint16_t kRoceDstPort = 4791;
constexpr uint8_t kUdp = 17;

enum class TimerKind : uint64_t { kFlowStart = 0, kResumeTimeout = 1 };

uint64_t EncodeTimer(TimerKind kind, uint32_t generation, uint32_t flow) {
  return (static_cast<uint64_t>(kind) << 62) |
         (static_cast<uint64_t>(generation & 0x3fffffff) << 32) | flow;
}

}  // namespace

void WriteTraceLine(std::ostream& out, const TraceRecord& r) {
  out << ToWholeNanos(r.time) << ' ' << TraceKindName(r.kind) << ' '
      << PacketTypeName(r.type) << ' ' << r.flow_id << ' ' << std::hex
      << r.key_hash << std::dec << ' ' << r.psn << ' ' << r.node << ' '
      << r.port << ' ' << static_cast<int>(r.epoch) << ' ' << r.flowcut_id
      << '\n';
}

int64_t DataHeaderBytes(const SimConfig& config) {
  return config.policy == RoutingPolicy::kFlowcut && !config.nic_mode
             ? kFlowcutHeaderBytes
             : 0;
}

class Simulation::Impl {
 public:
  Impl(const Topology& topology, const SimConfig& config,
       std::vector<FlowSpec> specs);

  RunResult Run();
  void set_trace(TraceSink sink) { trace_ = std::move(sink); }
  SimTime resume_timeout() const { return resume_timeout_; }

 private:
  struct OutPort {
    uint32_t out_channel = 0;
    uint32_t in_channel = 0;
    uint32_t peer = 0;
    uint32_t peer_port = 0;
    bool to_host = false;
    bool busy = false;
    uint32_t in_service = kNone;
    int next_vc = 0;
    std::deque<uint32_t> control;
    std::array<std::deque<uint32_t>, kNumVirtualChannels> data;
  };

  struct PortPair {
    uint32_t out_port = 0;
    uint32_t in_port = 0;
    int16_t via_group = -1;
  };

  // Ingress-only per-flow bookkeeping.
  struct IngressMeta {
    uint8_t epoch = 0;
    int32_t overlap_sent = 0;  // new-epoch packets sent while the old drains
    std::array<uint32_t, 2> flowcut_ids{};
    std::deque<uint32_t> held;
  };

  struct SwitchState {
    explicit SwitchState(size_t capacity) : table(capacity) {}
    FlowcutTable table;
    std::unordered_map<TableKey, PortPair, TableKeyHasher> parked;
    std::unordered_map<FlowKey, PortMemory, FlowKeyHasher> memory;
    std::unordered_map<FlowKey, IngressMeta, FlowKeyHasher> meta;
    RttFloorTable floor;
  };

  struct FlowState {
    FlowSpec spec;
    FlowKey key;
    uint32_t total_packets = 0;
    uint32_t next_psn = 0;
    int64_t bytes_sent = 0;  // payload
    bool started = false;
    bool paused = false;
    bool nic_draining = false;
    SimTime pause_start = 0;
    uint32_t pause_generation = 0;
    // Receiver.
    uint32_t expected_psn = 0;
    uint32_t lowest_missing = 0;
    std::vector<bool> received;
    int64_t bytes_received = 0;
    // NIC mode.
    int64_t nic_inflight = 0;
    RttState nic_rtt;
    std::vector<uint32_t> dependents;
    FlowRecord record;
  };

  struct HostState {
    std::vector<uint32_t> active;  // started flows with packets left to send
    size_t rr = 0;
    RttFloorTable nic_floor;
  };

  bool flowcut_switch() const {
    return config_.policy == RoutingPolicy::kFlowcut && !config_.nic_mode;
  }
  bool nic_flowcut() const {
    return config_.policy == RoutingPolicy::kFlowcut && config_.nic_mode;
  }
  bool is_host(uint32_t node) const { return topology_.IsHost(node); }
  SimTime now() const { return queue_.now(); }
  Packet& pkt(uint32_t id) { return packets_[id]; }
  SwitchState& sw(uint32_t node) { return *switches_[node - topology_.num_hosts()]; }

  uint32_t NewPacket(const Packet& p);
  void FreePacket(uint32_t id);

  void Trace(TraceKind kind, const Packet& p, uint32_t node, uint32_t port);
  void TraceFlowcut(TraceKind kind, uint32_t node, const FlowKey& key,
                    uint32_t flow_id, uint8_t epoch, uint32_t id);

  void Dispatch(const Event& ev);
  void OnArrival(uint32_t node, uint32_t port, uint32_t id);
  void OnTxComplete(uint32_t node, uint32_t port);
  void OnTimer(uint32_t host, uint64_t payload);

  // Output queues.
  void EnqueueData(uint32_t node, uint32_t port, uint32_t id);
  void EnqueueControl(uint32_t node, uint32_t port, uint32_t id);
  void TryTransmit(uint32_t node, uint32_t port);
  void Depart(uint32_t node, uint32_t port, uint32_t id, int vc);
  int64_t WireBytes(const OutPort& op, const Packet& p) const;

  // Switch datapath.
  void SwitchData(uint32_t node, uint32_t id);
  void SwitchControl(uint32_t node, uint32_t id);
  uint32_t ChoosePort(uint32_t node, Packet& p);
  int TargetGroup(const Packet& p) const;
  uint32_t TravelDestination(const Packet& p) const;
  int RandomIntermediateGroup(uint32_t node, uint32_t dst_host);
  int UgalDecide(uint32_t node, uint32_t dst_host);
  uint32_t LeastLoadedPort(uint32_t node, std::span<const uint32_t> cands);
  void IngressData(uint32_t node, uint32_t id);
  void AdvanceEpoch(SwitchState& s, const FlowKey& key, IngressMeta& meta);
  bool IngressBlocked(SwitchState& s, const FlowKey& key, const IngressMeta& m) const;
  void IngressForward(uint32_t node, uint32_t id, IngressMeta& meta);
  void ReleaseHeld(uint32_t node, const FlowKey& key);
  void TransitData(uint32_t node, uint32_t id);
  void EgressAck(uint32_t node, uint32_t data_id);
  void IngressAck(uint32_t node, const Packet& ack);
  void MaybeEarlyResume(uint32_t node, const FlowKey& key, uint8_t epoch,
                        uint32_t flow_id, uint32_t src_host);
  // Decrements a non-ingress entry; returns the ACK's next port.
  uint32_t DownstreamAckAccounting(uint32_t node, const Packet& ack,
                                   bool* found);
  void SendPauseFrame(uint32_t node, PacketType type, uint32_t flow_id,
                      const FlowKey& key, uint32_t src_host, uint8_t epoch);
  void MaybeDropMeta(uint32_t node, const FlowKey& key);

  // Hosts.
  void StartFlow(uint32_t flow);
  void TryHostTransmit(uint32_t host);
  void HostReceive(uint32_t host, uint32_t id);
  void HostData(uint32_t host, const Packet& p);
  void CompleteFlow(uint32_t flow);
  void PauseFlow(FlowState& f);
  void ResumeFlow(FlowState& f);
  void NicAck(const Packet& ack);

  void CheckInvariants();
  [[noreturn]] void Fail(const std::string& what);
  std::string DeadlockDiagnostic() const;

  const Topology topology_;
  SimConfig config_;
  SimTime resume_timeout_ = 0;
  int64_t header_bytes_ = 0;
  int64_t payload_cap_ = 0;
  EventQueue queue_;
  Rng rng_;
  TraceSink trace_;

  std::vector<Link> channels_;
  std::vector<std::pair<uint32_t, uint32_t>> channel_source_;  // (node, port)
  std::vector<std::vector<OutPort>> ports_;
  std::vector<std::vector<int64_t>> queued_bytes_;
  std::vector<std::unique_ptr<SwitchState>> switches_;
  std::vector<HostState> hosts_;
  std::vector<FlowState> flows_;
  size_t completed_ = 0;

  std::deque<Packet> packets_;  // deque: references survive growth
  std::vector<bool> live_;
  std::vector<uint32_t> free_ids_;
  uint32_t next_flowcut_id_ = 0;

  RunStats stats_;
};

Simulation::Impl::Impl(const Topology& topology, const SimConfig& config,
                       std::vector<FlowSpec> specs)
    : topology_(topology), config_(config), rng_(config.seed) {
  config_.congestion.Validate();
  if (config_.mtu <= kFlowcutHeaderBytes) throw ConfigError("mtu too small");
  if (config_.buffer_bytes / kNumVirtualChannels < config_.mtu) {
    throw ConfigError("buffer_bytes must hold one MTU packet per virtual channel");
  }
  if (config_.partial_resume_ood < 0) {
    throw ConfigError("partial_resume_ood must be >= 0");
  }
  if (config_.timeline_bucket <= 0) throw ConfigError("timeline bucket must be > 0");
  header_bytes_ = DataHeaderBytes(config_);
  payload_cap_ = config_.mtu - header_bytes_;
  resume_timeout_ = config_.resume_timeout < 0
                        ? 10 * topology_.BaseRtt(config_.mtu)
                        : config_.resume_timeout;
  stats_.timeline_bucket = config_.timeline_bucket;

  // The port buffer is split evenly across the virtual channels.
  const int64_t vc_buffer = config_.buffer_bytes / kNumVirtualChannels;
  const auto& links = topology_.links();
  channels_.reserve(2 * links.size());
  for (const LinkSpec& l : links) {
    channels_.emplace_back(l.bits_per_second, l.latency, vc_buffer, !is_host(l.b));
    channels_.emplace_back(l.bits_per_second, l.latency, vc_buffer, !is_host(l.a));
    channel_source_.emplace_back(l.a, l.a_port);
    channel_source_.emplace_back(l.b, l.b_port);
  }
  ports_.resize(topology_.num_nodes());
  queued_bytes_.resize(topology_.num_nodes());
  for (uint32_t n = 0; n < topology_.num_nodes(); ++n) {
    const auto& info = topology_.node(n).ports;
    ports_[n].resize(info.size());
    queued_bytes_[n].assign(info.size(), 0);
    for (uint32_t p = 0; p < info.size(); ++p) {
      const LinkSpec& l = links[info[p].link];
      const bool forward = (l.a == n && l.a_port == p);
      OutPort& op = ports_[n][p];
      op.out_channel = 2 * info[p].link + (forward ? 0 : 1);
      op.in_channel = 2 * info[p].link + (forward ? 1 : 0);
      op.peer = info[p].peer_node;
      op.peer_port = info[p].peer_port;
      op.to_host = info[p].to_host;
    }
  }
  for (uint32_t n = topology_.num_hosts(); n < topology_.num_nodes(); ++n) {
    switches_.push_back(std::make_unique<SwitchState>(config_.table_capacity));
  }
  stats_.max_table_entries.assign(topology_.num_switches(), 0);
  hosts_.resize(topology_.num_hosts());

  flows_.resize(specs.size());
  for (uint32_t i = 0; i < specs.size(); ++i) {
    const FlowSpec& s = specs[i];
    if (s.src >= topology_.num_hosts() || s.dst >= topology_.num_hosts()) {
      throw ConfigError("flow " + std::to_string(i) + " references a missing host");
    }
    if (s.src == s.dst) {
      throw ConfigError("flow " + std::to_string(i) + " sends to itself");
    }
    if (s.size < 0) throw ConfigError("flow " + std::to_string(i) + " has negative size");
    if (s.after >= static_cast<int32_t>(specs.size()) || s.after == static_cast<int32_t>(i)) {
      throw ConfigError("flow " + std::to_string(i) + " depends on a missing flow");
    }
    FlowState& f = flows_[i];
    f.spec = s;
    f.key.src_addr = 0x0A000000u | (s.src + 1);
    f.key.dst_addr = 0x0A000000u | (s.dst + 1);
    f.key.src_port = static_cast<uint16_t>(1024 + i % 64000);
    f.key.dst_port = kRoceDstPort;
    f.key.protocol = kUdp;
    f.total_packets = static_cast<uint32_t>((s.size + payload_cap_ - 1) / payload_cap_);
    f.received.assign(f.total_packets, false);
    f.record.flow_id = i;
    f.record.key = f.key;
    f.record.src = s.src;
    f.record.dst = s.dst;
    f.record.size = s.size;
    if (s.after >= 0) flows_[s.after].dependents.push_back(i);
  }
}

uint32_t Simulation::Impl::NewPacket(const Packet& p) {
  uint32_t id;
  if (!free_ids_.empty()) {
    id = free_ids_.back();
    free_ids_.pop_back();
    packets_[id] = p;
    live_[id] = true;
  } else {
    id = static_cast<uint32_t>(packets_.size());
    packets_.push_back(p);
    live_.push_back(true);
  }
  return id;
}

void Simulation::Impl::FreePacket(uint32_t id) {
  live_[id] = false;
  free_ids_.push_back(id);
}

void Simulation::Impl::Trace(TraceKind kind, const Packet& p, uint32_t node,
                             uint32_t port) {
  if (!trace_) return;
  TraceRecord r;
  r.time = now();
  r.kind = kind;
  r.type = p.type;
  r.flow_id = p.flow_id;
  r.key_hash = p.key.Hash();
  r.psn = p.psn;
  r.node = node;
  r.port = port;
  r.epoch = p.epoch;
  r.flowcut_id = p.flowcut_id;
  trace_(r);
}

void Simulation::Impl::TraceFlowcut(TraceKind kind, uint32_t node,
                                    const FlowKey& key, uint32_t flow_id,
                                    uint8_t epoch, uint32_t id) {
  if (!trace_) return;
  TraceRecord r;
  r.time = now();
  r.kind = kind;
  r.flow_id = flow_id;
  r.key_hash = key.Hash();
  r.node = node;
  r.epoch = epoch;
  r.flowcut_id = id;
  trace_(r);
}

RunResult Simulation::Impl::Run() {
  for (uint32_t i = 0; i < flows_.size(); ++i) {
    if (flows_[i].spec.after < 0) {
      queue_.Schedule(flows_[i].spec.start, flows_[i].spec.src, EventKind::kTimer,
                      0, EncodeTimer(TimerKind::kFlowStart, 0, i));
    }
  }
  while (!queue_.empty()) {
    const Event ev = queue_.Pop();
    Dispatch(ev);
    if (config_.check_invariants) CheckInvariants();
  }
  if (completed_ != flows_.size()) {
    throw DeadlockError(DeadlockDiagnostic());
  }
  RunResult out;
  stats_.final_time = queue_.now();
  stats_.events = queue_.dispatched();
  for (size_t s = 0; s < switches_.size(); ++s) {
    stats_.max_table_entries[s] = switches_[s]->table.max_size();
  }
  out.stats = stats_;
  out.flows.reserve(flows_.size());
  for (const FlowState& f : flows_) out.flows.push_back(f.record);
  return out;
}

void Simulation::Impl::Dispatch(const Event& ev) {
  switch (ev.kind) {
    case EventKind::kPacketArrival:
      OnArrival(ev.target, ev.port, static_cast<uint32_t>(ev.payload));
      break;
    case EventKind::kTxComplete:
      OnTxComplete(ev.target, ev.port);
      break;
    case EventKind::kTimer:
      OnTimer(ev.target, ev.payload);
      break;
    case EventKind::kControl:
      break;
  }
}

// ---------------------------------------------------------------------------
// Output queues

int64_t Simulation::Impl::WireBytes(const OutPort& op, const Packet& p) const {
  // The egress switch strips the routing header before host delivery.
  if (p.type == PacketType::kData && op.to_host) return p.payload;
  return p.size;
}

void Simulation::Impl::EnqueueData(uint32_t node, uint32_t port, uint32_t id) {
  Packet& p = pkt(id);
  const int vc = std::min<int>(p.hop_count, kNumVirtualChannels - 1);
  ports_[node][port].data[vc].push_back(id);
  queued_bytes_[node][port] += p.size;
  TryTransmit(node, port);
}

void Simulation::Impl::EnqueueControl(uint32_t node, uint32_t port, uint32_t id) {
  pkt(id).node = node;
  ports_[node][port].control.push_back(id);
  queued_bytes_[node][port] += pkt(id).size;
  TryTransmit(node, port);
}

void Simulation::Impl::TryTransmit(uint32_t node, uint32_t port) {
  OutPort& op = ports_[node][port];
  if (op.busy) return;
  if (!op.control.empty()) {
    const uint32_t id = op.control.front();
    op.control.pop_front();
    Depart(node, port, id, kControlChannel);
    return;
  }
  const Link& link = channels_[op.out_channel];
  for (int k = 0; k < kNumVirtualChannels; ++k) {
    const int vc = (op.next_vc + k) % kNumVirtualChannels;
    auto& q = op.data[vc];
    if (q.empty()) continue;
    const uint32_t id = q.front();
    if (!link.HasCredits(vc, WireBytes(op, pkt(id)))) continue;
    q.pop_front();
    op.next_vc = (vc + 1) % kNumVirtualChannels;
    Depart(node, port, id, vc);
    return;
  }
}

void Simulation::Impl::Depart(uint32_t node, uint32_t port, uint32_t id, int vc) {
  OutPort& op = ports_[node][port];
  Packet& p = pkt(id);
  // The packet leaves this node's input buffer. Upstream is woken last:
  // a host may create packets and invalidate `p`.
  int64_t freed_channel = -1;
  if (p.type == PacketType::kData && !is_host(node) && p.in_port >= 0) {
    freed_channel = ports_[node][p.in_port].in_channel;
    channels_[freed_channel].ReturnCredits(p.vc, p.size);
  }
  Link& link = channels_[op.out_channel];
  const int64_t wire = WireBytes(op, p);
  const SimTime arrival = link.Transmit(now(), vc, wire);
  const SimTime done = now() + link.SerializationOf(wire);
  if (topology_.links()[op.out_channel / 2].fabric) {
    if (p.type == PacketType::kData) stats_.fabric_data_bytes += wire;
    if (p.type == PacketType::kAck) stats_.fabric_ack_bytes += wire;
  }
  op.busy = true;
  op.in_service = id;
  p.on_wire = true;
  p.wire_link = op.out_channel;
  p.vc = static_cast<int8_t>(vc);
  Trace(TraceKind::kDepart, p, node, port);
  queue_.Schedule(done, node, EventKind::kTxComplete, port);
  queue_.Schedule(arrival, op.peer, EventKind::kPacketArrival, op.peer_port, id);
  if (freed_channel >= 0) {
    const auto [up_node, up_port] = channel_source_[freed_channel];
    if (is_host(up_node)) {
      TryHostTransmit(up_node);
    } else if (!(up_node == node && up_port == port)) {
      TryTransmit(up_node, up_port);
    }
  }
}

void Simulation::Impl::OnTxComplete(uint32_t node, uint32_t port) {
  OutPort& op = ports_[node][port];
  const uint32_t id = op.in_service;
  op.busy = false;
  op.in_service = kNone;
  queued_bytes_[node][port] -= pkt(id).size;
  if (!is_host(node) && op.to_host && flowcut_switch() &&
      pkt(id).type == PacketType::kData && !pkt(id).untracked) {
    EgressAck(node, id);
  }
  if (is_host(node)) {
    TryHostTransmit(node);
  } else {
    TryTransmit(node, port);
  }
}

void Simulation::Impl::OnArrival(uint32_t node, uint32_t port, uint32_t id) {
  Packet& p = pkt(id);
  p.on_wire = false;
  p.node = node;
  p.in_port = static_cast<int32_t>(port);
  Trace(TraceKind::kArrive, p, node, port);
  if (is_host(node)) {
    HostReceive(node, id);
    return;
  }
  if (p.type == PacketType::kData) {
    SwitchData(node, id);
  } else {
    SwitchControl(node, id);
  }
}

// ---------------------------------------------------------------------------
// Switch datapath

int Simulation::Impl::TargetGroup(const Packet& p) const {
  return (p.via_group >= 0 && !p.via_reached) ? p.via_group : -1;
}

uint32_t Simulation::Impl::TravelDestination(const Packet& p) const {
  return p.type == PacketType::kData ? p.dst_host : p.src_host;
}

uint32_t Simulation::Impl::LeastLoadedPort(uint32_t node,
                                           std::span<const uint32_t> cands) {
  return LeastLoaded(cands, queued_bytes_[node], rng_);
}

int Simulation::Impl::RandomIntermediateGroup(uint32_t node, uint32_t dst_host) {
  if (topology_.kind() != TopologyKind::kDragonfly) return -1;
  const int src_g = topology_.node(node).group;
  const int dst_g = topology_.HostGroup(dst_host);
  // Intra-group traffic stays minimal; a detour would revisit the group.
  if (src_g == dst_g) return -1;
  std::vector<int> choices;
  for (int g = 0; g < topology_.num_groups(); ++g) {
    if (g != src_g && g != dst_g) choices.push_back(g);
  }
  if (choices.empty()) return -1;
  return choices[rng_.UniformInt(choices.size())];
}

int Simulation::Impl::UgalDecide(uint32_t node, uint32_t dst_host) {
  if (topology_.HostSwitch(dst_host) == node) return -1;
  const int via = RandomIntermediateGroup(node, dst_host);
  if (via < 0) return -1;
  const auto min_c = topology_.Candidates(node, dst_host, -1);
  const auto nm_c = topology_.Candidates(node, dst_host, via);
  const int64_t q_min = queued_bytes_[node][LeastLoadedPort(node, min_c)];
  const int64_t q_nm = queued_bytes_[node][LeastLoadedPort(node, nm_c)];
  const int h_min = topology_.PathSwitchHops(node, dst_host, -1);
  const int h_nm = topology_.PathSwitchHops(node, dst_host, via);
  return UgalPrefersMinimal(q_min, h_min, q_nm, h_nm) ? -1 : via;
}

uint32_t Simulation::Impl::ChoosePort(uint32_t node, Packet& p) {
  const auto cands = topology_.Candidates(node, p.dst_host, TargetGroup(p));
  if (cands.size() == 1) return cands[0];
  switch (config_.policy) {
    case RoutingPolicy::kEcmp:
      return EcmpPick(cands, p.key, node);
    case RoutingPolicy::kSpray:
    case RoutingPolicy::kValiant:
      return RandomPick(cands, rng_);
    case RoutingPolicy::kUgal:
      return LeastLoadedPort(node, cands);
    case RoutingPolicy::kFlowlet:
    case RoutingPolicy::kFlowcell: {
      SelectionInput in;
      in.policy = config_.policy;
      in.key = p.key;
      in.psn = p.psn;
      in.size = p.size;
      in.now = now();
      in.salt = node;
      in.candidates = cands;
      in.queue_bytes_by_port = queued_bytes_[node];
      in.flowlet_timeout = config_.flowlet_timeout;
      in.flowcell_bytes = config_.flowcell_bytes;
      PortMemory& mem = sw(node).memory[p.key];
      const uint32_t port = SelectOutputPort(in, mem, rng_);
      if (p.last_of_flow) sw(node).memory.erase(p.key);
      return port;
    }
    case RoutingPolicy::kFlowcut:
      // NIC mode: switches hash; the source rewrites the port to reroute.
      return EcmpPick(cands, p.key, node);
  }
  return cands[0];
}

void Simulation::Impl::SwitchData(uint32_t node, uint32_t id) {
  Packet& p = pkt(id);
  if (p.hop_count >= kMaxHopCount) {
    throw std::logic_error("hop count overflow for flow " + std::to_string(p.flow_id));
  }
  ++p.hop_count;
  const bool from_host = ports_[node][p.in_port].to_host;
  if (p.via_group >= 0 && !p.via_reached &&
      topology_.node(node).group == p.via_group) {
    p.via_reached = true;
  }
  if (flowcut_switch()) {
    if (from_host) {
      IngressData(node, id);
    } else {
      TransitData(node, id);
    }
    return;
  }
  if (from_host && topology_.kind() == TopologyKind::kDragonfly) {
    if (config_.policy == RoutingPolicy::kUgal) {
      p.via_group = static_cast<int16_t>(UgalDecide(node, p.dst_host));
    } else if (config_.policy == RoutingPolicy::kValiant) {
      p.via_group = static_cast<int16_t>(RandomIntermediateGroup(node, p.dst_host));
    }
  }
  EnqueueData(node, ChoosePort(node, p), id);
}

bool Simulation::Impl::IngressBlocked(SwitchState& s, const FlowKey& key,
                                      const IngressMeta& m) const {
  const FlowcutEntry* old = s.table.Find(TableKey{key, static_cast<uint8_t>(m.epoch ^ 1)});
  return old != nullptr &&
         old->inflight_packets + m.overlap_sent > config_.partial_resume_ood;
}

void Simulation::Impl::AdvanceEpoch(SwitchState& s, const FlowKey& key, IngressMeta& meta) {
  const FlowcutEntry* cur = s.table.Find(TableKey{key, meta.epoch});
  if (cur != nullptr && cur->drain_state == DrainState::kDrainedAwaitingResume) {
    // Early resume: the next flowcut runs under the other epoch.
    meta.epoch ^= 1;
    meta.overlap_sent = 0;
  }
}

void Simulation::Impl::IngressData(uint32_t node, uint32_t id) {
  Packet& p = pkt(id);
  p.ingress_timestamp = now();
  SwitchState& s = sw(node);
  IngressMeta& meta = s.meta[p.key];
  AdvanceEpoch(s, p.key, meta);
  if (!meta.held.empty() || IngressBlocked(s, p.key, meta)) {
    meta.held.push_back(id);
    return;
  }
  IngressForward(node, id, meta);
}

void Simulation::Impl::IngressForward(uint32_t node, uint32_t id, IngressMeta& meta) {
  Packet& p = pkt(id);
  SwitchState& s = sw(node);
  const TableKey tk{p.key, meta.epoch};
  FlowcutEntry* e = s.table.Find(tk);
  if (e == nullptr) {
    FlowcutEntry fresh;
    if (topology_.kind() == TopologyKind::kDragonfly) {
      fresh.via_group = static_cast<int16_t>(UgalDecide(node, p.dst_host));
    }
    fresh.out_port = LeastLoadedPort(
        node, topology_.Candidates(node, p.dst_host, fresh.via_group));
    fresh.in_port = static_cast<uint32_t>(p.in_port);
    e = s.table.Insert(tk, fresh);
    if (e == nullptr) {
      ++stats_.table_overflows;
      p.untracked = true;
      EnqueueData(node, EcmpPick(topology_.Candidates(node, p.dst_host, -1), p.key, node),
                  id);
      return;
    }
    meta.flowcut_ids[meta.epoch] = ++next_flowcut_id_;
    p.flowcut_start = true;
    TraceFlowcut(TraceKind::kFlowcutStart, node, p.key, p.flow_id, meta.epoch,
                 next_flowcut_id_);
  }
  if (s.table.Find(TableKey{p.key, static_cast<uint8_t>(meta.epoch ^ 1)}) != nullptr) {
    ++meta.overlap_sent;
  }
  p.epoch = meta.epoch;
  p.via_group = e->via_group;
  p.via_reached = false;
  p.passed_ingress = true;
  p.flowcut_id = meta.flowcut_ids[meta.epoch];
  e->inflight_bytes += p.size;
  ++e->inflight_packets;
  EnqueueData(node, e->out_port, id);
}

void Simulation::Impl::ReleaseHeld(uint32_t node, const FlowKey& key) {
  SwitchState& s = sw(node);
  auto it = s.meta.find(key);
  if (it == s.meta.end()) return;
  IngressMeta& meta = it->second;
  while (!meta.held.empty()) {
    AdvanceEpoch(s, key, meta);
    if (IngressBlocked(s, key, meta)) break;
    const uint32_t id = meta.held.front();
    meta.held.pop_front();
    IngressForward(node, id, meta);
  }
}

void Simulation::Impl::MaybeDropMeta(uint32_t node, const FlowKey& key) {
  SwitchState& s = sw(node);
  auto it = s.meta.find(key);
  if (it == s.meta.end() || !it->second.held.empty()) return;
  if (s.table.Find(TableKey{key, 0}) || s.table.Find(TableKey{key, 1})) return;
  s.meta.erase(it);
}

void Simulation::Impl::TransitData(uint32_t node, uint32_t id) {
  Packet& p = pkt(id);
  SwitchState& s = sw(node);
  const auto cands = topology_.Candidates(node, p.dst_host, TargetGroup(p));
  if (p.untracked) {
    EnqueueData(node, EcmpPick(cands, p.key, node), id);
    return;
  }
  const TableKey tk{p.key, p.epoch};
  FlowcutEntry* e = s.table.Find(tk);
  const auto valid = [&](uint32_t port) {
    return std::find(cands.begin(), cands.end(), port) != cands.end();
  };
  if (e == nullptr) {
    FlowcutEntry fresh;
    fresh.in_port = static_cast<uint32_t>(p.in_port);
    fresh.via_group = p.via_group;
    auto parked = s.parked.find(tk);
    if (!p.flowcut_start && parked != s.parked.end() &&
        valid(parked->second.out_port)) {
      fresh.out_port = parked->second.out_port;
    } else {
      fresh.out_port = LeastLoadedPort(node, cands);
    }
    if (parked != s.parked.end()) s.parked.erase(parked);
    e = s.table.Insert(tk, fresh);
    if (e == nullptr) {
      ++stats_.table_overflows;
      EnqueueData(node, fresh.out_port, id);
      return;
    }
  } else if (!valid(e->out_port)) {
    throw std::logic_error("flowcut entry port " + std::to_string(e->out_port) +
                           " is not a candidate at switch " + std::to_string(node) +
                           " (flow " + std::to_string(p.flow_id) + ", psn " +
                           std::to_string(p.psn) + ", hop " + std::to_string(p.hop_count) +
                           ", target group " + std::to_string(TargetGroup(p)) + ")");
  }
  e->inflight_bytes += p.size;
  ++e->inflight_packets;
  EnqueueData(node, e->out_port, id);
}

uint32_t Simulation::Impl::DownstreamAckAccounting(uint32_t node, const Packet& ack,
                                                   bool* found) {
  SwitchState& s = sw(node);
  const TableKey tk{ack.key, ack.epoch};
  FlowcutEntry* e = s.table.Find(tk);
  if (e == nullptr) {
    *found = false;
    return 0;
  }
  *found = true;
  const PortPair ports{e->out_port, e->in_port, e->via_group};
  e->inflight_bytes -= ack.acked_bytes;
  --e->inflight_packets;
  if (e->inflight_bytes < 0 || e->inflight_packets < 0) {
    throw std::logic_error("negative in-flight count at switch " +
                           std::to_string(node));
  }
  if (e->inflight_bytes == 0) {
    s.table.Erase(tk);
    if (!ack.last_of_flow) s.parked[tk] = ports;
  }
  return ports.in_port;
}

void Simulation::Impl::EgressAck(uint32_t node, uint32_t data_id) {
  Packet& data = pkt(data_id);
  data.acked = true;
  Packet ack = MakeAck(data);
  const bool ingress = topology_.HostSwitch(ack.src_host) == node;
  if (ingress) {
    // Source and destination share the switch: the ACK never leaves it.
    IngressAck(node, ack);
    return;
  }
  bool found = false;
  uint32_t out = DownstreamAckAccounting(node, ack, &found);
  if (!found) {
    out = EcmpPick(topology_.Candidates(node, ack.src_host, -1), ack.key.Reversed(), node);
  }
  if (config_.ack_loss_probability > 0.0 && rng_.Bernoulli(config_.ack_loss_probability)) {
    ++stats_.acks_lost;
    return;
  }
  EnqueueControl(node, out, NewPacket(ack));
}

void Simulation::Impl::SwitchControl(uint32_t node, uint32_t id) {
  Packet& p = pkt(id);
  if (p.type == PacketType::kAck) {
    if (topology_.HostSwitch(p.src_host) == node) {
      const Packet ack = p;
      FreePacket(id);
      IngressAck(node, ack);
      return;
    }
    bool found = false;
    uint32_t out = DownstreamAckAccounting(node, p, &found);
    if (!found) {
      out = EcmpPick(topology_.Candidates(node, p.src_host, -1), p.key.Reversed(), node);
    }
    EnqueueControl(node, out, id);
    return;
  }
  // XOFF/XON/NIC-ACK travel towards the data source by plain hashing.
  const uint32_t dst = TravelDestination(p);
  const auto cands = topology_.Candidates(node, dst, -1);
  EnqueueControl(node, cands.size() == 1 ? cands[0] : EcmpPick(cands, p.key.Reversed(), node),
                 id);
}

void Simulation::Impl::SendPauseFrame(uint32_t node, PacketType type,
                                      uint32_t flow_id, const FlowKey& key,
                                      uint32_t src_host, uint8_t epoch) {
  Packet c;
  c.type = type;
  c.key = key;
  c.flow_id = flow_id;
  c.size = kControlWireBytes;
  c.src_host = src_host;
  c.dst_host = src_host;
  c.epoch = epoch;
  c.vc = kControlChannel;
  Trace(type == PacketType::kXoff ? TraceKind::kXoff : TraceKind::kXon, c, node,
        topology_.HostSwitchPort(src_host));
  if (type == PacketType::kXoff) {
    ++stats_.xoff_sent;
  } else {
    ++stats_.xon_sent;
    if (config_.xon_loss_probability > 0.0 &&
        rng_.Bernoulli(config_.xon_loss_probability)) {
      ++stats_.xon_lost;
      return;
    }
  }
  EnqueueControl(node, topology_.HostSwitchPort(src_host), NewPacket(c));
}

void Simulation::Impl::IngressAck(uint32_t node, const Packet& ack) {
  SwitchState& s = sw(node);
  const TableKey tk{ack.key, ack.epoch};
  FlowcutEntry* e = s.table.Find(tk);
  if (e == nullptr) {
    ++stats_.stale_acks;
    return;
  }
  e->inflight_bytes -= ack.acked_bytes;
  --e->inflight_packets;
  if (e->inflight_bytes < 0 || e->inflight_packets < 0) {
    throw std::logic_error("negative in-flight count at ingress " +
                           std::to_string(node));
  }
  const double norm = NormalizedRtt(now() - ack.echoed_timestamp, ack.acked_bytes,
                                    ack.echoed_hop_count, config_.congestion, s.floor);
  e->rtt.Update(norm, config_.congestion.alpha);
  if (e->inflight_packets == 0) {
    if (e->drain_state == DrainState::kDraining) {
      SendPauseFrame(node, PacketType::kXon, ack.flow_id, ack.key, ack.src_host,
                     ack.epoch);
    }
    const uint32_t fc_id = s.meta.count(ack.key) ? s.meta[ack.key].flowcut_ids[ack.epoch] : 0;
    s.table.Erase(tk);
    TraceFlowcut(TraceKind::kFlowcutEnd, node, ack.key, ack.flow_id, ack.epoch, fc_id);
  } else if (e->drain_state == DrainState::kActive &&
             EvaluateDrain(e->rtt, config_.congestion) == DrainDecision::kDrain) {
    e->drain_state = DrainState::kDraining;
    SendPauseFrame(node, PacketType::kXoff, ack.flow_id, ack.key, ack.src_host,
                   ack.epoch);
  }
  MaybeEarlyResume(node, ack.key, 0, ack.flow_id, ack.src_host);
  MaybeEarlyResume(node, ack.key, 1, ack.flow_id, ack.src_host);
  ReleaseHeld(node, ack.key);
  MaybeDropMeta(node, ack.key);
}

void Simulation::Impl::MaybeEarlyResume(uint32_t node, const FlowKey& key,
                                        uint8_t epoch, uint32_t flow_id,
                                        uint32_t src_host) {
  if (config_.partial_resume_ood <= 0) return;
  SwitchState& s = sw(node);
  FlowcutEntry* e = s.table.Find(TableKey{key, epoch});
  if (e == nullptr || e->drain_state != DrainState::kDraining) return;
  if (e->inflight_packets > config_.partial_resume_ood) return;
  if (s.table.Find(TableKey{key, static_cast<uint8_t>(epoch ^ 1)}) != nullptr) return;
  e->drain_state = DrainState::kDrainedAwaitingResume;
  SendPauseFrame(node, PacketType::kXon, flow_id, key, src_host, epoch);
}

// ---------------------------------------------------------------------------
// Hosts

void Simulation::Impl::OnTimer(uint32_t host, uint64_t payload) {
  const auto kind = static_cast<TimerKind>(payload >> 62);
  const uint32_t flow = static_cast<uint32_t>(payload & 0xffffffffu);
  const uint32_t generation = static_cast<uint32_t>((payload >> 32) & 0x3fffffff);
  (void)host;
  if (kind == TimerKind::kFlowStart) {
    StartFlow(flow);
    return;
  }
  FlowState& f = flows_[flow];
  if (f.paused && !f.nic_draining &&
      (f.pause_generation & 0x3fffffff) == generation) {
    ++f.record.timeouts;
    ++stats_.timeouts;
    ResumeFlow(f);
    TryHostTransmit(f.spec.src);
  }
}

void Simulation::Impl::StartFlow(uint32_t flow) {
  FlowState& f = flows_[flow];
  f.started = true;
  f.record.start = now();
  if (f.total_packets == 0) {
    CompleteFlow(flow);
    return;
  }
  hosts_[f.spec.src].active.push_back(flow);
  TryHostTransmit(f.spec.src);
}

void Simulation::Impl::TryHostTransmit(uint32_t host) {
  OutPort& op = ports_[host][0];
  if (op.busy) return;
  if (!op.control.empty()) {
    const uint32_t id = op.control.front();
    op.control.pop_front();
    Depart(host, 0, id, kControlChannel);
    return;
  }
  HostState& h = hosts_[host];
  const Link& link = channels_[op.out_channel];
  const size_t n = h.active.size();
  for (size_t k = 0; k < n; ++k) {
    const size_t idx = (h.rr + k) % n;
    FlowState& f = flows_[h.active[idx]];
    if (f.paused) continue;
    const int64_t remaining = f.spec.size - f.bytes_sent;
    const int64_t payload = std::min(remaining, payload_cap_);
    const int64_t size = payload + header_bytes_;
    if (!link.HasCredits(0, size)) continue;

    Packet p;
    p.type = PacketType::kData;
    p.key = f.key;
    p.flow_id = h.active[idx];
    p.psn = f.next_psn++;
    p.payload = static_cast<uint32_t>(payload);
    p.size = static_cast<uint32_t>(size);
    p.last_of_flow = f.next_psn == f.total_packets;
    p.nic_timestamp = now();
    p.src_host = f.spec.src;
    p.dst_host = f.spec.dst;
    p.node = host;
    f.bytes_sent += payload;
    if (nic_flowcut()) f.nic_inflight += size;
    if (p.last_of_flow) {
      h.active.erase(h.active.begin() + static_cast<ptrdiff_t>(idx));
      h.rr = h.active.empty() ? 0 : idx % h.active.size();
    } else {
      h.rr = (idx + 1) % n;
    }
    const uint32_t id = NewPacket(p);
    queued_bytes_[host][0] += size;
    Trace(TraceKind::kInject, pkt(id), host, 0);
    Depart(host, 0, id, 0);
    return;
  }
}

void Simulation::Impl::HostReceive(uint32_t host, uint32_t id) {
  const Packet p = pkt(id);
  FreePacket(id);
  switch (p.type) {
    case PacketType::kData:
      Trace(TraceKind::kDeliver, p, host, 0);
      HostData(host, p);
      break;
    case PacketType::kXoff: {
      FlowState& f = flows_[p.flow_id];
      if (f.record.completed() || f.next_psn == f.total_packets) {
        ++stats_.stale_control;
      } else if (!f.paused) {
        PauseFlow(f);
        ++f.record.drains;
        if (resume_timeout_ > 0) {
          queue_.Schedule(now() + resume_timeout_, host, EventKind::kTimer, 0,
                          EncodeTimer(TimerKind::kResumeTimeout, f.pause_generation,
                                      p.flow_id));
        }
      }
      break;
    }
    case PacketType::kXon: {
      FlowState& f = flows_[p.flow_id];
      if (!f.paused || f.nic_draining) {
        ++stats_.stale_control;
      } else {
        ResumeFlow(f);
        TryHostTransmit(host);
      }
      break;
    }
    case PacketType::kNicAck:
      NicAck(p);
      break;
    case PacketType::kAck:
      throw std::logic_error("switch ACK delivered to a host");
  }
}

void Simulation::Impl::PauseFlow(FlowState& f) {
  f.paused = true;
  f.pause_start = now();
  ++f.pause_generation;
}

void Simulation::Impl::ResumeFlow(FlowState& f) {
  f.paused = false;
  f.record.paused += now() - f.pause_start;
}

void Simulation::Impl::HostData(uint32_t host, const Packet& p) {
  FlowState& f = flows_[p.flow_id];
  FlowRecord& r = f.record;
  ++r.packets;
  if (p.psn == f.expected_psn) {
    ++f.expected_psn;
  } else {
    ++r.ooo;
    f.expected_psn = std::max(f.expected_psn, p.psn + 1);
  }
  if (p.psn > f.lowest_missing) {
    r.max_ood = std::max(r.max_ood, p.psn - f.lowest_missing);
    stats_.max_ood = std::max(stats_.max_ood, r.max_ood);
  }
  if (f.received[p.psn]) {
    throw std::logic_error("duplicate delivery of flow " +
                           std::to_string(p.flow_id) + " psn " + std::to_string(p.psn));
  }
  f.received[p.psn] = true;
  while (f.lowest_missing < f.total_packets && f.received[f.lowest_missing]) {
    ++f.lowest_missing;
  }
  f.bytes_received += p.payload;
  const size_t bucket = static_cast<size_t>(now() / config_.timeline_bucket);
  if (stats_.timeline.size() <= bucket) stats_.timeline.resize(bucket + 1, 0);
  stats_.timeline[bucket] += p.payload;

  if (nic_flowcut()) {
    Packet ack;
    ack.type = PacketType::kNicAck;
    ack.key = p.key;
    ack.flow_id = p.flow_id;
    ack.psn = p.psn;
    ack.size = kNicAckWireBytes;
    ack.acked_bytes = p.size;
    ack.echoed_timestamp = p.nic_timestamp;
    ack.echoed_hop_count = p.hop_count;
    ack.src_host = p.src_host;
    ack.dst_host = p.dst_host;
    ack.vc = kControlChannel;
    ack.node = host;
    const uint32_t id = NewPacket(ack);
    ports_[host][0].control.push_back(id);
    queued_bytes_[host][0] += ack.size;
    TryHostTransmit(host);
  }
  if (f.bytes_received == f.spec.size) CompleteFlow(p.flow_id);
}

void Simulation::Impl::CompleteFlow(uint32_t flow) {
  FlowState& f = flows_[flow];
  f.record.end = now();
  if (f.paused) ResumeFlow(f);
  ++completed_;
  for (uint32_t child : f.dependents) {
    queue_.Schedule(now() + flows_[child].spec.start, flows_[child].spec.src,
                    EventKind::kTimer, 0, EncodeTimer(TimerKind::kFlowStart, 0, child));
  }
}

void Simulation::Impl::NicAck(const Packet& ack) {
  FlowState& f = flows_[ack.flow_id];
  HostState& h = hosts_[f.spec.src];
  f.nic_inflight -= ack.acked_bytes;
  if (f.nic_inflight < 0) throw std::logic_error("negative NIC in-flight count");
  const double norm = NormalizedRtt(now() - ack.echoed_timestamp, ack.acked_bytes,
                                    ack.echoed_hop_count, config_.congestion,
                                    h.nic_floor);
  f.nic_rtt.Update(norm, config_.congestion.alpha);
  if (f.nic_inflight == 0) {
    f.nic_rtt = RttState{};
    if (f.nic_draining) {
      const uint16_t old = f.key.src_port;
      do {
        f.key.src_port = static_cast<uint16_t>(1024 + rng_.UniformInt(65536 - 1024));
      } while (f.key.src_port == old);
      f.nic_draining = false;
      ++f.record.reroutes;
      ++stats_.reroutes;
      ResumeFlow(f);
      TryHostTransmit(f.spec.src);
    }
    return;
  }
  if (!f.nic_draining && !f.paused && f.next_psn < f.total_packets &&
      EvaluateDrain(f.nic_rtt, config_.congestion) == DrainDecision::kDrain) {
    f.nic_draining = true;
    ++f.record.drains;
    PauseFlow(f);
  }
}

// ---------------------------------------------------------------------------
// Checks

void Simulation::Impl::Fail(const std::string& what) {
  std::ostringstream os;
  os << "invariant violated at t=" << ToWholeNanos(now()) << "ns: " << what;
  throw InvariantError(os.str());
}

void Simulation::Impl::CheckInvariants() {
  const size_t nch = channels_.size();
  std::vector<int64_t> charged(nch * kNumVirtualChannels, 0);
  std::vector<int64_t> flow_live(flows_.size(), 0);
  std::unordered_map<TableKey, int64_t, TableKeyHasher> ingress_live;
  for (uint32_t id = 0; id < packets_.size(); ++id) {
    if (!live_[id]) continue;
    const Packet& p = packets_[id];
    if (p.type == PacketType::kData) {
      flow_live[p.flow_id] += p.payload;
      if (p.on_wire) {
        if (channels_[p.wire_link].credit_limited()) {
          charged[p.wire_link * kNumVirtualChannels + p.vc] += p.size;
        }
      } else if (!is_host(p.node) && p.in_port >= 0) {
        const uint32_t ch = ports_[p.node][p.in_port].in_channel;
        if (channels_[ch].credit_limited()) {
          charged[ch * kNumVirtualChannels + p.vc] += p.size;
        }
      }
      if (p.passed_ingress && !p.acked && !p.untracked) {
        ingress_live[TableKey{p.key, p.epoch}] += p.size;
      }
    } else if (p.type == PacketType::kAck) {
      ingress_live[TableKey{p.key, p.epoch}] += p.acked_bytes;
    }
  }
  for (size_t ch = 0; ch < nch; ++ch) {
    const Link& l = channels_[ch];
    if (!l.credit_limited()) continue;
    for (int vc = 0; vc < kNumVirtualChannels; ++vc) {
      const int64_t c = charged[ch * kNumVirtualChannels + vc];
      if (l.credits(vc) < 0 || l.credits(vc) + c != l.buffer_bytes()) {
        Fail("credit conservation on channel " + std::to_string(ch) + " vc " +
             std::to_string(vc) + ": credits " + std::to_string(l.credits(vc)) +
             " + buffered " + std::to_string(c) + " != " +
             std::to_string(l.buffer_bytes()));
      }
    }
  }
  for (uint32_t i = 0; i < flows_.size(); ++i) {
    const FlowState& f = flows_[i];
    if (f.bytes_sent != f.bytes_received + flow_live[i]) {
      Fail("byte conservation for flow " + std::to_string(i));
    }
  }
  if (!flowcut_switch() || config_.ack_loss_probability > 0.0) return;
  size_t matched = 0;
  for (uint32_t n = topology_.num_hosts(); n < topology_.num_nodes(); ++n) {
    for (const auto& [tk, e] : sw(n).table.entries()) {
      if (e.inflight_bytes < 0 || e.inflight_packets < 0) {
        Fail("negative in-flight count at switch " + std::to_string(n));
      }
      if (e.inflight_bytes == 0 && e.drain_state == DrainState::kActive) {
        Fail("idle flowcut entry retained at switch " + std::to_string(n));
      }
      if (!ports_[n][e.in_port].to_host) continue;
      auto it = ingress_live.find(tk);
      const int64_t live = it == ingress_live.end() ? 0 : it->second;
      if (live != e.inflight_bytes) {
        Fail("ingress in-flight " + std::to_string(e.inflight_bytes) +
             " != live bytes " + std::to_string(live) + " at switch " +
             std::to_string(n));
      }
      if (it != ingress_live.end()) ++matched;
    }
  }
  size_t nonzero = 0;
  for (const auto& [tk, v] : ingress_live) nonzero += v != 0 ? 1 : 0;
  if (matched != nonzero) Fail("in-flight bytes without an ingress entry");
}

std::string Simulation::Impl::DeadlockDiagnostic() const {
  std::ostringstream os;
  os << "deadlock at t=" << ToWholeNanos(now()) << "ns: "
     << (flows_.size() - completed_) << " of " << flows_.size()
     << " flows incomplete";
  int shown = 0;
  for (uint32_t i = 0; i < flows_.size() && shown < 16; ++i) {
    const FlowState& f = flows_[i];
    if (f.record.completed()) continue;
    ++shown;
    os << "\n  flow " << i << " " << f.spec.src << "->" << f.spec.dst
       << " sent " << f.next_psn << "/" << f.total_packets << " received "
       << f.bytes_received << "/" << f.spec.size << " bytes";
    if (!f.started) {
      os << " [not started]";
    } else if (f.paused) {
      os << " [paused since " << ToWholeNanos(f.pause_start) << "ns]";
    } else if (f.next_psn < f.total_packets) {
      os << " [blocked]";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

Simulation::Simulation(const Topology& topology, const SimConfig& config,
                       std::vector<FlowSpec> flows)
    : impl_(std::make_unique<Impl>(topology, config, std::move(flows))) {}

Simulation::~Simulation() = default;

void Simulation::set_trace(TraceSink sink) { impl_->set_trace(std::move(sink)); }

RunResult Simulation::Run() { return impl_->Run(); }

SimTime Simulation::resume_timeout() const { return impl_->resume_timeout(); }

}  // namespace flowcut
