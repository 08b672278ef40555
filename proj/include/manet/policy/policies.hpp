#pragma once

#include <memory>

#include "manet/metrics/types.hpp"
#include "manet/transport/sender_state.hpp"

namespace manet::policy {

using transport::PolicyKind;

struct PolicyConfig {
  PolicyKind kind = PolicyKind::Madtcp;
  int cwl_fixed = 4;   // ADTCP limit; M-ADTCP starting limit
  int cwl_min = 2;
  int cwl_max = 8;
  double probe_interval = 2.0;  // s between probes while disconnected
  int tcp_window = 32;          // receiver-window cap for the baseline

  /// Throws std::invalid_argument unless 1 <= cwl_min <= cwl_fixed <= cwl_max.
  void validate() const;
};

/// Side effects an ADTCP reaction asks of the sender.
struct WindowAction {
  bool retransmit_earliest = false;
  bool restart_rto = false;
  bool enter_probe = false;
};

/// ADTCP per-state reaction. Window changes are applied to `state` directly.
///   CONGESTED      ssthresh = max(cwnd/2, 2), cwnd = ssthresh
///   CHANNEL_ERROR  retransmit earliest unacked, window untouched
///   ROUTE_CHANGE   freeze cwnd, restart RTO, retransmit earliest unacked
///   DISCONNECTED   probe mode
///   NORMAL         regular growth
WindowAction adtcp_react(metrics::NetworkState network_state, transport::SenderState& state);

/// M-ADTCP limit update, applied after adtcp_react: additive increase on
/// NORMAL, halving on CONGESTED, unchanged otherwise, always within
/// [cwl_min, cwl_max]. cwnd is re-clamped to the new limit. Returns the limit.
int madtcp_update_cwl(metrics::NetworkState network_state, transport::SenderState& state,
                      const PolicyConfig& config);

/// Baseline: feedback is ignored.
class TcpPolicy final : public transport::CongestionPolicy {
 public:
  explicit TcpPolicy(PolicyConfig config) : config_(config) {}
  PolicyKind kind() const override { return PolicyKind::Tcp; }
  int initial_cwl() const override { return config_.tcp_window; }
  int cwl_ceiling() const override { return config_.tcp_window; }
  void on_feedback(const transport::Feedback&, transport::SenderControl&) override {}

 private:
  PolicyConfig config_;
};

class AdtcpPolicy : public transport::CongestionPolicy {
 public:
  explicit AdtcpPolicy(PolicyConfig config) : config_(config) {}
  PolicyKind kind() const override { return PolicyKind::Adtcp; }
  int initial_cwl() const override { return config_.cwl_fixed; }
  int cwl_ceiling() const override { return config_.cwl_fixed; }
  void on_feedback(const transport::Feedback& feedback, transport::SenderControl& sender) override;

 protected:
  void apply(const WindowAction& action, transport::SenderControl& sender) const;
  PolicyConfig config_;
};

class MadtcpPolicy final : public AdtcpPolicy {
 public:
  explicit MadtcpPolicy(PolicyConfig config) : AdtcpPolicy(config) {}
  PolicyKind kind() const override { return PolicyKind::Madtcp; }
  int cwl_ceiling() const override { return config_.cwl_max; }
  void on_feedback(const transport::Feedback& feedback, transport::SenderControl& sender) override;
};

std::unique_ptr<transport::CongestionPolicy> make_policy(const PolicyConfig& config);

}  // namespace manet::policy
