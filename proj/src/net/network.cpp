#include "manet/net/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace manet::net {

const char* to_string(DropReason reason) {
  switch (reason) {
    case DropReason::QueueOverflow: return "queue_overflow";
    case DropReason::MacRetry: return "mac_retry";
    case DropReason::LinkDown: return "link_down";
    case DropReason::RouteBreak: return "route_break";
    case DropReason::SendBuffer: return "send_buffer";
    case DropReason::InjectedLoss: return "injected_loss";
  }
  return "unknown";
}

Network::Network(sim::Simulator& simulator, NetworkConfig config, std::vector<Position> initial,
                 std::uint64_t seed)
    : sim_(simulator),
      config_(config),
      mac_(config.mac),
      mobility_(config.mobility, std::move(initial), sim::RngStream::derive(seed, "mobility")),
      mac_rng_(sim::RngStream::derive(seed, "mac")),
      loss_rng_(sim::RngStream::derive(seed, "loss")),
      nodes_(mobility_.size()) {
  if (nodes_.size() != config_.node_count) {
    throw std::invalid_argument("initial positions do not match node count");
  }
}

void Network::start() {
  if (topology_log_enabled_) log_topology();
  if (config_.mobility.max_speed > 0) {
    sim_.schedule_in(config_.mobility_step, [this] { mobility_tick(); }, "mobility");
  }
}

void Network::mobility_tick() {
  mobility_.step(config_.mobility_step);
  if (topology_log_enabled_) log_topology();
  sim_.schedule_in(config_.mobility_step, [this] { mobility_tick(); }, "mobility");
}

void Network::log_topology() {
  for (NodeId n = 0; n < nodes_.size(); ++n) {
    topology_log_.push_back({sim_.now(), n, mobility_.position(n)});
  }
}

void Network::set_handler(FlowId flow, NodeId at, Handler handler) {
  handlers_[{flow, at}] = std::move(handler);
}

const FlowCounters& Network::counters(FlowId flow) const { return counters_[flow]; }

std::uint64_t Network::in_flight(FlowId flow) const {
  std::uint64_t count = 0;
  for (const auto& node : nodes_) {
    if (node.current && node.current->flow == flow) ++count;
    count += std::count_if(node.queue.begin(), node.queue.end(),
                           [flow](const Packet& p) { return p.flow == flow; });
  }
  for (const auto& [key, discovery] : discoveries_) {
    count += std::count_if(discovery.buffer.begin(), discovery.buffer.end(),
                           [flow](const Packet& p) { return p.flow == flow; });
  }
  return count;
}

void Network::record(const Packet& packet, PacketEventKind kind, DropReason reason) {
  auto& c = counters_[packet.flow];
  switch (kind) {
    case PacketEventKind::Sent: ++c.sent; break;
    case PacketEventKind::Delivered: ++c.delivered; break;
    case PacketEventKind::Dropped: ++c.dropped[static_cast<std::size_t>(reason)]; break;
  }
  if (packet_log_enabled_) {
    packet_log_.push_back({sim_.now(), packet.uid, packet.flow, kind, reason});
  }
}

void Network::drop(Packet&& packet, DropReason reason) {
  record(packet, PacketEventKind::Dropped, reason);
}

void Network::send(Packet packet) {
  if (packet.src >= nodes_.size() || packet.dst >= nodes_.size() || packet.src == packet.dst) {
    throw std::invalid_argument("packet endpoints invalid");
  }
  packet.uid = next_uid_++;
  packet.created = sim_.now();
  packet.hop = 0;
  record(packet, PacketEventKind::Sent);

  PairKey key{packet.src, packet.dst};
  if (auto it = routes_.find(key); it != routes_.end()) {
    packet.route = it->second;
    enqueue(packet.src, std::move(packet));
    return;
  }
  auto& discovery = discoveries_[key];
  if (discovery.buffer.size() >= config_.send_buffer) {
    drop(std::move(packet), DropReason::SendBuffer);
  } else {
    discovery.buffer.push_back(std::move(packet));
  }
  if (!discovery.in_progress) start_discovery(key.first, key.second);
}

void Network::start_discovery(NodeId src, NodeId dst) {
  PairKey key{src, dst};
  discoveries_[key].in_progress = true;
  auto positions = mobility_.positions();
  auto route = route_discover(positions, config_.range, src, dst);
  if (!route) {
    sim_.schedule_in(config_.discovery_retry, [this, key] {
      auto& d = discoveries_[key];
      if (d.buffer.empty()) {
        d.in_progress = false;
        return;
      }
      start_discovery(key.first, key.second);
    }, "route_retry");
    return;
  }
  double latency = config_.discovery_per_hop * static_cast<double>(route->size() - 1);
  sim_.schedule_in(latency, [this, key, r = std::move(*route)] {
    routes_[key] = r;
    auto& d = discoveries_[key];
    d.in_progress = false;
    auto pending = std::move(d.buffer);
    d.buffer.clear();
    for (auto& packet : pending) {
      packet.route = r;
      packet.hop = 0;
      enqueue(key.first, std::move(packet));
    }
  }, "route_reply");
}

void Network::enqueue(NodeId node, Packet&& packet) {
  auto& n = nodes_[node];
  if (n.queue.size() >= config_.queue_length) {
    drop(std::move(packet), DropReason::QueueOverflow);
    return;
  }
  n.queue.push_back(std::move(packet));
  kick(node);
}

void Network::kick(NodeId node) {
  auto& n = nodes_[node];
  if (n.current || n.access_pending || n.queue.empty()) return;
  n.current = std::move(n.queue.front());
  n.queue.pop_front();
  n.attempts = 0;
  ++n.stats.submitted;
  n.access_pending = true;
  sim_.schedule(std::max(sim_.now(), n.ready_at), [this, node] { access(node); }, "mac_access");
}

std::uint32_t Network::contenders(NodeId node) const {
  std::uint32_t k = 0;
  const Position here = mobility_.position(node);
  for (NodeId other = 0; other < nodes_.size(); ++other) {
    const auto& o = nodes_[other];
    bool backlogged = o.current.has_value() || !o.queue.empty();
    if (backlogged && within_range(here, mobility_.position(other), config_.range)) ++k;
  }
  return k;
}

void Network::access(NodeId node) {
  auto& n = nodes_[node];
  n.access_pending = false;
  const sim::SimTime now = sim_.now();
  const Position here = mobility_.position(node);

  sim::SimTime busy_until = now;
  for (NodeId other = 0; other < nodes_.size(); ++other) {
    if (other == node) continue;
    const auto& o = nodes_[other];
    if (o.tx_end > now && within_range(here, mobility_.position(other), config_.range)) {
      busy_until = std::max(busy_until, o.tx_end);
    }
  }
  if (busy_until > now) {
    n.access_pending = true;
    sim::SimTime retry = busy_until + mac_.backoff(n.attempts, mac_rng_);
    sim_.schedule(retry, [this, node] { access(node); }, "mac_defer");
    return;
  }

  Packet& packet = *n.current;
  NodeId next = packet.route.at(packet.hop + 1);
  if (!within_range(here, mobility_.position(next), config_.range)) {
    ++n.stats.link_down;
    drop(std::move(packet), DropReason::LinkDown);
    n.current.reset();
    link_break(node, next, MacResult::LinkDown);
    finish_frame(node);
    return;
  }

  ++n.attempts;
  ++n.stats.attempts;
  double p = mac_.collision_probability(contenders(node));
  bool success = !mac_rng_.bernoulli(p);
  double airtime = mac_.attempt_duration(packet.size);
  n.tx_end = now + airtime;
  sim_.schedule(n.tx_end, [this, node, success] { end_attempt(node, success); }, "mac_end");
}

void Network::end_attempt(NodeId node, bool success) {
  auto& n = nodes_[node];
  if (success) {
    ++n.stats.delivered;
    Packet packet = std::move(*n.current);
    n.current.reset();
    NodeId next = packet.route.at(packet.hop + 1);
    finish_frame(node);
    arrive(next, std::move(packet));
    return;
  }
  ++n.stats.failed_attempts;
  if (n.attempts >= config_.mac.retry_limit) {
    ++n.stats.dropped;
    NodeId next = n.current->route.at(n.current->hop + 1);
    drop(std::move(*n.current), DropReason::MacRetry);
    n.current.reset();
    link_break(node, next, MacResult::Dropped);
    finish_frame(node);
    return;
  }
  n.access_pending = true;
  sim_.schedule_in(mac_.backoff(n.attempts, mac_rng_), [this, node] { access(node); },
                   "mac_retry");
}

void Network::finish_frame(NodeId node) {
  auto& n = nodes_[node];
  n.ready_at = sim_.now() + mac_.backoff(0, mac_rng_);
  kick(node);
}

void Network::arrive(NodeId node, Packet&& packet) {
  packet.hop += 1;
  if (packet.hop + 1 < packet.route.size()) {
    enqueue(node, std::move(packet));
    return;
  }
  if (packet.segment && config_.segment_loss > 0 && loss_rng_.bernoulli(config_.segment_loss)) {
    drop(std::move(packet), DropReason::InjectedLoss);
    return;
  }
  record(packet, PacketEventKind::Delivered);
  if (auto it = handlers_.find({packet.flow, node}); it != handlers_.end()) {
    it->second(std::move(packet));
  }
}

void Network::link_break(NodeId from, NodeId to, MacResult cause) {
  link_breaks_.push_back({sim_.now(), from, to, cause});

  auto& q = nodes_[from].queue;
  for (auto it = q.begin(); it != q.end();) {
    if (it->route.at(it->hop + 1) == to) {
      drop(std::move(*it), DropReason::RouteBreak);
      it = q.erase(it);
    } else {
      ++it;
    }
  }

  std::vector<PairKey> stale;
  for (const auto& [key, route] : routes_) {
    if (route_uses_hop(route, from, to)) stale.push_back(key);
  }
  for (const auto& key : stale) {
    routes_.erase(key);
    if (!discoveries_[key].in_progress) start_discovery(key.first, key.second);
  }
}

}  // namespace manet::net
