#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "manet/net/geometry.hpp"
#include "manet/net/mac.hpp"
#include "manet/net/mobility.hpp"
#include "manet/net/routing.hpp"
#include "manet/sim/rng.hpp"
#include "manet/sim/simulator.hpp"

namespace manet::transport {
struct Segment;
}

namespace manet::net {

struct Packet {
  std::uint64_t uid = 0;
  FlowId flow = 0;
  NodeId src = 0;
  NodeId dst = 0;
  std::uint32_t size = 0;  // bytes on air
  Route route;
  std::size_t hop = 0;  // index in `route` of the node holding the packet
  sim::SimTime created = 0.0;
  std::shared_ptr<const transport::Segment> segment;  // null for datagrams
};

enum class DropReason : std::uint8_t {
  QueueOverflow,
  MacRetry,
  LinkDown,
  RouteBreak,
  SendBuffer,
  InjectedLoss,
};
inline constexpr std::size_t kDropReasonCount = 6;
const char* to_string(DropReason reason);

enum class PacketEventKind : std::uint8_t { Sent, Delivered, Dropped };

struct PacketEvent {
  sim::SimTime time;
  std::uint64_t uid;
  FlowId flow;
  PacketEventKind kind;
  DropReason reason;  // meaningful for Dropped only
};

/// Census of one flow's packets, built from the packet event stream.
struct FlowCounters {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::array<std::uint64_t, kDropReasonCount> dropped{};

  std::uint64_t dropped_total() const {
    std::uint64_t total = 0;
    for (auto d : dropped) total += d;
    return total;
  }
};

/// Per-node MAC census; every submitted frame ends in exactly one outcome.
struct MacStats {
  std::uint64_t submitted = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t link_down = 0;
  std::uint64_t attempts = 0;
  std::uint64_t failed_attempts = 0;
};

struct LinkBreak {
  sim::SimTime time;
  NodeId from;
  NodeId to;
  MacResult cause;
};

struct TopologySample {
  sim::SimTime time;
  NodeId node;
  Position position;
};

struct NetworkConfig {
  std::size_t node_count = 5;
  double range = 250.0;
  MacConfig mac;
  MobilityConfig mobility;
  double mobility_step = 0.1;        // s between position updates
  std::size_t queue_length = 50;     // interface queue, drop-tail
  std::size_t send_buffer = 64;      // packets awaiting a route, per (src, dst)
  double discovery_per_hop = 0.002;  // s per hop of the discovered route
  double discovery_retry = 0.5;      // s between attempts while unreachable
  double segment_loss = 0.0;         // extra loss on transport segments at delivery
};

/// Wireless multi-hop network: mobility, shared-medium MAC with carrier sense
/// and probabilistic collisions, and source routing with discovery/repair.
class Network {
 public:
  using Handler = std::function<void(Packet&&)>;

  Network(sim::Simulator& simulator, NetworkConfig config, std::vector<Position> initial,
          std::uint64_t seed);
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  /// Starts periodic mobility updates (no-op for a static topology).
  void start();

  /// Injects a packet at packet.src. Assigns uid and creation time.
  void send(Packet packet);

  /// Called when a packet of `flow` reaches node `at`.
  void set_handler(FlowId flow, NodeId at, Handler handler);

  const NetworkConfig& config() const { return config_; }
  const MacModel& mac() const { return mac_; }
  const RandomWaypoint& mobility() const { return mobility_; }
  std::vector<Position> positions() const { return mobility_.positions(); }

  const FlowCounters& counters(FlowId flow) const;
  /// Packets of `flow` currently held in queues, the MAC or send buffers.
  std::uint64_t in_flight(FlowId flow) const;
  const MacStats& mac_stats(NodeId node) const { return nodes_.at(node).stats; }
  const std::vector<LinkBreak>& link_breaks() const { return link_breaks_; }

  void enable_packet_log(bool on) { packet_log_enabled_ = on; }
  const std::vector<PacketEvent>& packet_log() const { return packet_log_; }
  void enable_topology_log(bool on) { topology_log_enabled_ = on; }
  const std::vector<TopologySample>& topology_log() const { return topology_log_; }

 private:
  struct Node {
    std::deque<Packet> queue;
    std::optional<Packet> current;
    std::uint32_t attempts = 0;
    bool access_pending = false;
    sim::SimTime tx_end = -1.0;
    sim::SimTime ready_at = 0.0;
    MacStats stats;
  };
  struct Discovery {
    std::deque<Packet> buffer;
    bool in_progress = false;
  };
  using PairKey = std::pair<NodeId, NodeId>;

  void record(const Packet& packet, PacketEventKind kind, DropReason reason = {});
  void drop(Packet&& packet, DropReason reason);
  void enqueue(NodeId node, Packet&& packet);
  void kick(NodeId node);
  void access(NodeId node);
  void end_attempt(NodeId node, bool success);
  void finish_frame(NodeId node);
  void arrive(NodeId node, Packet&& packet);
  void link_break(NodeId from, NodeId to, MacResult cause);
  void start_discovery(NodeId src, NodeId dst);
  void mobility_tick();
  void log_topology();
  std::uint32_t contenders(NodeId node) const;

  sim::Simulator& sim_;
  NetworkConfig config_;
  MacModel mac_;
  RandomWaypoint mobility_;
  sim::RngStream mac_rng_;
  sim::RngStream loss_rng_;
  std::vector<Node> nodes_;
  std::map<PairKey, Route> routes_;
  std::map<PairKey, Discovery> discoveries_;
  std::map<std::pair<FlowId, NodeId>, Handler> handlers_;
  mutable std::map<FlowId, FlowCounters> counters_;
  std::uint64_t next_uid_ = 1;
  std::vector<LinkBreak> link_breaks_;
  bool packet_log_enabled_ = false;
  std::vector<PacketEvent> packet_log_;
  bool topology_log_enabled_ = false;
  std::vector<TopologySample> topology_log_;
};

}  // namespace manet::net
