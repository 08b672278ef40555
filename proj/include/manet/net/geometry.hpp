#pragma once

#include <cmath>
#include <cstdint>

namespace manet::net {

using NodeId = std::uint32_t;
using FlowId = std::uint32_t;

/// Metres within the field rectangle.
struct Position {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Position&) const = default;
};

inline double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Disk propagation model: a link exists iff the endpoints are at most
/// `range` metres apart.
inline bool within_range(Position a, Position b, double range) { return distance(a, b) <= range; }

}  // namespace manet::net
