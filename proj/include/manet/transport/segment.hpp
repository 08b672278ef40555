#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "manet/metrics/types.hpp"
#include "manet/net/geometry.hpp"

namespace manet::transport {

/// Receiver's latest interval classification, echoed on every ACK.
struct Feedback {
  std::int64_t interval_id = 0;
  metrics::NetworkState state = metrics::NetworkState::Normal;
  metrics::MetricSample sample;
};

struct Segment {
  enum class Kind : std::uint8_t { Data, Ack };

  net::FlowId flow = 0;
  Kind kind = Kind::Data;
  std::uint64_t seq = 0;     // packet sequence number, from 1
  double send_time = 0.0;    // stamped at (re)transmission
  bool retransmission = false;
  std::vector<std::uint8_t> payload;

  std::uint64_t cum_ack = 0;   // next seq expected by the receiver
  bool feedback_only = false;  // standalone feedback, not an acknowledgement
  std::optional<Feedback> feedback;
};

}  // namespace manet::transport
