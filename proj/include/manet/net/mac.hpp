#pragma once

#include <cstdint>

#include "manet/net/geometry.hpp"
#include "manet/sim/rng.hpp"

namespace manet::net {

/// Contention-abstracted 802.11 parameters.
struct MacConfig {
  double bit_rate = 2e6;          // bits/s
  double overhead = 0.00075;      // s per attempt: DIFS, PHY preamble, MAC ACK
  double slot_time = 20e-6;       // s
  std::uint32_t cw_min = 31;      // slots
  std::uint32_t cw_max = 1023;    // slots
  std::uint32_t retry_limit = 7;  // attempts per frame
  double base_collision = 0.05;   // per-pair collision probability p0
};

/// One hop transmission unit.
struct Frame {
  NodeId src = 0;
  NodeId dst = 0;  // next hop
  std::uint32_t size = 0;
  std::uint32_t attempt = 0;
};

enum class MacResult { Delivered, Dropped, LinkDown };

struct MacOutcome {
  MacResult result = MacResult::Dropped;
  double delay = 0.0;  // from submission to the end of the last attempt
  std::uint32_t attempts = 0;
};

/// Timing and loss rules shared by the event-driven network and the
/// stand-alone transmit used for calibration.
class MacModel {
 public:
  explicit MacModel(MacConfig config = {}) : config_(config) {}

  const MacConfig& config() const { return config_; }

  /// Airtime of one attempt including the fixed per-attempt overhead.
  double attempt_duration(std::uint32_t bytes) const {
    return bytes * 8.0 / config_.bit_rate + config_.overhead;
  }

  /// 1 - (1 - p0)^(k - 1) for k contending transmitters in range (k >= 1).
  double collision_probability(std::uint32_t contenders) const;

  /// Random backoff after `failures` unsuccessful attempts: uniform slot count
  /// in [0, cw] with cw doubling per failure from cw_min up to cw_max.
  double backoff(std::uint32_t failures, sim::RngStream& rng) const;

  /// Runs the whole retry sequence of one frame on an otherwise idle queue
  /// with a fixed per-attempt failure probability.
  MacOutcome transmit(Frame& frame, double p_collision, sim::RngStream& rng) const;

 private:
  MacConfig config_;
};

}  // namespace manet::net
