#include "manet/net/mobility.hpp"

#include <algorithm>
#include <stdexcept>

namespace manet::net {

RandomWaypoint::RandomWaypoint(MobilityConfig config, std::vector<Position> initial,
                               sim::RngStream rng)
    : config_(config), rng_(std::move(rng)) {
  nodes_.reserve(initial.size());
  for (Position p : initial) {
    if (p.x < 0 || p.y < 0 || p.x > config_.field_width || p.y > config_.field_height) {
      throw std::invalid_argument("initial position outside the field");
    }
    MobilityState node;
    node.position = p;
    node.waypoint = p;
    nodes_.push_back(node);
  }
  if (config_.max_speed > 0) {
    for (auto& node : nodes_) draw_leg(node);
  }
}

std::vector<Position> RandomWaypoint::random_placement(const MobilityConfig& config,
                                                       std::size_t count, sim::RngStream& rng) {
  std::vector<Position> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double x = rng.uniform(0.0, config.field_width);
    double y = rng.uniform(0.0, config.field_height);
    out.push_back({x, y});
  }
  return out;
}

std::vector<Position> RandomWaypoint::positions() const {
  std::vector<Position> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.position);
  return out;
}

void RandomWaypoint::draw_leg(MobilityState& node) {
  node.waypoint = {rng_.uniform(0.0, config_.field_width), rng_.uniform(0.0, config_.field_height)};
  node.speed = config_.max_speed * (1.0 - rng_.uniform());
}

void RandomWaypoint::step(double dt) {
  if (!(dt > 0)) throw std::invalid_argument("mobility step must be positive");
  for (auto& node : nodes_) {
    double left = dt;
    while (left > 0 && node.speed > 0) {
      if (node.pause_left > 0) {
        double wait = std::min(node.pause_left, left);
        node.pause_left -= wait;
        left -= wait;
        continue;
      }
      double remaining = distance(node.position, node.waypoint);
      double reach = node.speed * left;
      if (reach < remaining) {
        double f = reach / remaining;
        node.position.x += (node.waypoint.x - node.position.x) * f;
        node.position.y += (node.waypoint.y - node.position.y) * f;
        break;
      }
      left -= remaining / node.speed;
      node.position = node.waypoint;
      node.pause_left = config_.pause_time;
      if (config_.max_speed > 0) {
        draw_leg(node);
      } else {
        node.speed = 0;
      }
    }
    node.position.x = std::clamp(node.position.x, 0.0, config_.field_width);
    node.position.y = std::clamp(node.position.y, 0.0, config_.field_height);
  }
}

}  // namespace manet::net
