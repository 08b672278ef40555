#pragma once

#include <optional>
#include <span>
#include <vector>

#include "manet/net/geometry.hpp"

namespace manet::net {

/// Ordered hop list from source to destination, both inclusive.
using Route = std::vector<NodeId>;

/// Flood-style discovery over the current range graph: the shortest-hop route
/// from src to dst, ties broken by the lexicographically smallest node
/// sequence. Returns nullopt when dst is unreachable.
std::optional<Route> route_discover(std::span<const Position> positions, double range, NodeId src,
                                    NodeId dst);

/// True if `route` traverses the directed hop (from, to).
bool route_uses_hop(const Route& route, NodeId from, NodeId to);

}  // namespace manet::net
