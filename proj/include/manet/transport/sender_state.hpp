#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string_view>

#include "manet/metrics/types.hpp"

namespace manet::transport {

enum class PolicyKind : std::uint8_t { Tcp, Adtcp, Madtcp };

const char* to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy(std::string_view text);

/// Window state of one sender, in packets.
struct SenderState {
  PolicyKind policy = PolicyKind::Tcp;
  double cwnd = 1.0;
  int cwl = 8;       // congestion window limit
  int cwl_max = 8;
  double ssthresh = 64.0;
  std::uint64_t next_seq = 1;  // next new sequence number
  std::uint64_t snd_una = 1;   // oldest unacknowledged sequence number
  std::uint32_t dupacks = 0;
  std::uint32_t backoffs = 0;  // consecutive RTO expiries
  bool growth_frozen = false;
  bool probe_mode = false;
  double frozen_cwnd = 1.0;
  double frozen_ssthresh = 64.0;
  metrics::NetworkState last_state = metrics::NetworkState::Normal;

  std::uint64_t inflight() const { return next_seq - snd_una; }
  /// Packets allowed in flight: min(cwnd, CWL), at least one.
  std::uint64_t window() const {
    auto w = static_cast<std::uint64_t>(std::min(cwnd, static_cast<double>(cwl)));
    return std::max<std::uint64_t>(w, 1);
  }
};

/// Operations a congestion policy may trigger on its sender.
class SenderControl {
 public:
  virtual ~SenderControl() = default;
  virtual SenderState& state() = 0;
  virtual void retransmit_earliest() = 0;
  virtual void restart_rto_timer() = 0;
  virtual void enter_probe_mode(double probe_interval) = 0;
};

struct Feedback;

/// Sender-side reaction to receiver feedback. The sender delivers at most one
/// feedback per receiver interval.
class CongestionPolicy {
 public:
  virtual ~CongestionPolicy() = default;
  virtual PolicyKind kind() const = 0;
  virtual int initial_cwl() const = 0;
  virtual int cwl_ceiling() const = 0;
  virtual void on_feedback(const Feedback& feedback, SenderControl& sender) = 0;
};

}  // namespace manet::transport
