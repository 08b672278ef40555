#include "manet/policy/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "manet/transport/segment.hpp"

namespace manet::policy {

using metrics::NetworkState;

void PolicyConfig::validate() const {
  if (cwl_min < 1 || cwl_min > cwl_fixed || cwl_fixed > cwl_max) {
    throw std::invalid_argument("policy limits must satisfy 1 <= cwl_min <= cwl_fixed <= cwl_max");
  }
  if (!(probe_interval > 0)) throw std::invalid_argument("probe_interval must be positive");
  if (tcp_window < 1) throw std::invalid_argument("tcp_window must be positive");
}

WindowAction adtcp_react(NetworkState network_state, transport::SenderState& state) {
  WindowAction action;
  if (network_state != NetworkState::RouteChange) state.growth_frozen = false;
  switch (network_state) {
    case NetworkState::Congested:
      state.ssthresh = std::max(state.cwnd / 2.0, 2.0);
      state.cwnd = std::min(state.ssthresh, static_cast<double>(state.cwl));
      break;
    case NetworkState::ChannelError:
      action.retransmit_earliest = true;
      break;
    case NetworkState::RouteChange:
      state.growth_frozen = true;
      action.restart_rto = true;
      action.retransmit_earliest = true;
      break;
    case NetworkState::Disconnected:
      action.enter_probe = true;
      break;
    case NetworkState::Normal:
      break;
  }
  return action;
}

int madtcp_update_cwl(NetworkState network_state, transport::SenderState& state,
                      const PolicyConfig& config) {
  int cwl = state.cwl;
  if (network_state == NetworkState::Normal) {
    cwl = cwl + 1;
  } else if (network_state == NetworkState::Congested) {
    cwl = cwl / 2;
  }
  state.cwl = std::clamp(cwl, config.cwl_min, config.cwl_max);
  state.cwnd = std::min(state.cwnd, static_cast<double>(state.cwl));
  return state.cwl;
}

void AdtcpPolicy::apply(const WindowAction& action, transport::SenderControl& sender) const {
  if (action.retransmit_earliest) sender.retransmit_earliest();
  if (action.restart_rto) sender.restart_rto_timer();
  if (action.enter_probe) sender.enter_probe_mode(config_.probe_interval);
}

void AdtcpPolicy::on_feedback(const transport::Feedback& feedback,
                              transport::SenderControl& sender) {
  apply(adtcp_react(feedback.state, sender.state()), sender);
}

void MadtcpPolicy::on_feedback(const transport::Feedback& feedback,
                               transport::SenderControl& sender) {
  auto action = adtcp_react(feedback.state, sender.state());
  madtcp_update_cwl(feedback.state, sender.state(), config_);
  apply(action, sender);
}

std::unique_ptr<transport::CongestionPolicy> make_policy(const PolicyConfig& config) {
  config.validate();
  switch (config.kind) {
    case PolicyKind::Tcp: return std::make_unique<TcpPolicy>(config);
    case PolicyKind::Adtcp: return std::make_unique<AdtcpPolicy>(config);
    case PolicyKind::Madtcp: return std::make_unique<MadtcpPolicy>(config);
  }
  throw std::invalid_argument("unknown policy");
}

}  // namespace manet::policy
