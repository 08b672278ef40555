#include "manet/net/routing.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace manet::net {

std::optional<Route> route_discover(std::span<const Position> positions, double range, NodeId src,
                                    NodeId dst) {
  const std::size_t n = positions.size();
  if (src >= n || dst >= n) throw std::out_of_range("route_discover: node id out of range");
  if (src == dst) return Route{src};

  // BFS with neighbours visited in ascending id order: each level of the
  // queue is ordered by the lexicographic order of its paths, so the first
  // parent found for a node is the lexicographically smallest one.
  constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> parent(n, kNone);
  std::vector<bool> seen(n, false);
  std::vector<NodeId> frontier{src};
  seen[src] = true;
  for (std::size_t head = 0; head < frontier.size() && !seen[dst]; ++head) {
    NodeId u = frontier[head];
    for (NodeId v = 0; v < n; ++v) {
      if (seen[v] || !within_range(positions[u], positions[v], range)) continue;
      seen[v] = true;
      parent[v] = u;
      frontier.push_back(v);
    }
  }
  if (!seen[dst]) return std::nullopt;

  Route route;
  for (NodeId v = dst; v != kNone; v = parent[v]) route.push_back(v);
  std::reverse(route.begin(), route.end());
  return route;
}

bool route_uses_hop(const Route& route, NodeId from, NodeId to) {
  for (std::size_t i = 0; i + 1 < route.size(); ++i) {
    if (route[i] == from && route[i + 1] == to) return true;
  }
  return false;
}

}  // namespace manet::net
