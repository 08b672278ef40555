#pragma once

#include <optional>
#include <span>
#include <vector>

#include "manet/net/geometry.hpp"
#include "manet/sim/rng.hpp"

namespace manet::net {

struct MobilityConfig {
  double field_width = 670.0;
  double field_height = 670.0;
  double max_speed = 4.0;   // m/s; 0 gives a static topology
  double pause_time = 0.0;  // s spent at each waypoint
};

struct MobilityState {
  Position position;
  Position waypoint;
  double speed = 0.0;
  double pause_left = 0.0;
};

/// Random-waypoint mobility. Waypoints are uniform over the field and speeds
/// uniform in (0, max_speed].
class RandomWaypoint {
 public:
  /// Nodes start at `initial` positions; the first waypoint of each node is
  /// drawn immediately unless the model is static.
  RandomWaypoint(MobilityConfig config, std::vector<Position> initial, sim::RngStream rng);

  /// Uniform placement of `count` nodes inside the field.
  static std::vector<Position> random_placement(const MobilityConfig& config, std::size_t count,
                                                sim::RngStream& rng);

  void step(double dt);

  std::size_t size() const { return nodes_.size(); }
  Position position(NodeId id) const { return nodes_.at(id).position; }
  std::vector<Position> positions() const;
  const MobilityState& state(NodeId id) const { return nodes_.at(id); }
  void set_state(NodeId id, MobilityState state) { nodes_.at(id) = state; }
  const MobilityConfig& config() const { return config_; }

 private:
  void draw_leg(MobilityState& node);

  MobilityConfig config_;
  std::vector<MobilityState> nodes_;
  sim::RngStream rng_;
};

}  // namespace manet::net
