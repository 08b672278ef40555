#include "manet/transport/sender.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace manet::transport {

const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Tcp: return "tcp";
    case PolicyKind::Adtcp: return "adtcp";
    case PolicyKind::Madtcp: return "madtcp";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy(std::string_view text) {
  if (text == "tcp") return PolicyKind::Tcp;
  if (text == "adtcp") return PolicyKind::Adtcp;
  if (text == "madtcp") return PolicyKind::Madtcp;
  return std::nullopt;
}

TransportSender::TransportSender(sim::Simulator& simulator, net::FlowId flow, SenderConfig config,
                                 std::unique_ptr<CongestionPolicy> policy, Transmit transmit)
    : sim_(simulator),
      flow_(flow),
      config_(config),
      policy_(std::move(policy)),
      transmit_(std::move(transmit)),
      rtt_(config.rtt) {
  if (!policy_) throw std::invalid_argument("sender requires a congestion policy");
  if (config_.packet_size == 0) throw std::invalid_argument("packet size must be positive");
  state_.policy = policy_->kind();
  state_.cwl = policy_->initial_cwl();
  state_.cwl_max = policy_->cwl_ceiling();
  state_.ssthresh = config_.initial_ssthresh;
}

TransportSender::~TransportSender() {
  rto_timer_.cancel();
  probe_timer_.cancel();
}

void TransportSender::trace(const char* event, std::uint64_t seq) {
  if (trace_) {
    trace_({sim_.now(), event, seq, state_.cwnd, state_.cwl, rtt_.rto(), state_.last_state});
  }
}

std::size_t TransportSender::send_data(std::span<const std::uint8_t> bytes) {
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
  return try_send();
}

void TransportSender::set_source(Source source) {
  source_ = std::move(source);
  try_send();
}

std::size_t TransportSender::try_send() {
  if (failed_ || state_.probe_mode) return 0;
  std::size_t emitted = 0;
  while (state_.inflight() < state_.window()) {
    if (buffered_bytes() == 0 && source_) {
      if (head_ > 0) {
        buffer_.clear();
        head_ = 0;
      }
      source_(buffer_, static_cast<std::size_t>(config_.packet_size) * state_.window());
    }
    std::size_t available = buffered_bytes();
    if (available == 0) break;

    std::size_t take = std::min<std::size_t>(available, config_.packet_size);
    Outstanding out;
    out.payload.assign(buffer_.begin() + static_cast<std::ptrdiff_t>(head_),
                       buffer_.begin() + static_cast<std::ptrdiff_t>(head_ + take));
    head_ += take;
    if (head_ == buffer_.size()) {
      buffer_.clear();
      head_ = 0;
    } else if (head_ > 65536 && head_ * 2 > buffer_.size()) {
      buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(head_));
      head_ = 0;
    }
    outstanding_.push_back(std::move(out));
    std::uint64_t seq = state_.next_seq++;
    emit(seq, false);
    ++emitted;
  }
  if (emitted > 0 && !rto_pending()) restart_rto_timer();
  return emitted;
}

void TransportSender::emit(std::uint64_t seq, bool retransmission) {
  auto& out = outstanding_.at(seq - state_.snd_una);
  out.sent = sim_.now();
  if (retransmission) {
    out.retransmitted = true;
    ++stats_.retransmissions;
  }
  ++stats_.segments_sent;
  Segment seg;
  seg.flow = flow_;
  seg.kind = Segment::Kind::Data;
  seg.seq = seq;
  seg.send_time = out.sent;
  seg.retransmission = retransmission;
  seg.payload = out.payload;
  trace(retransmission ? "retransmit" : "send", seq);
  transmit_(std::move(seg));
}

void TransportSender::retransmit_earliest() {
  if (failed_) return;
  if (outstanding_.empty()) return;
  emit(state_.snd_una, true);
}

void TransportSender::restart_rto_timer() {
  rto_timer_.cancel();
  if (outstanding_.empty() || failed_ || state_.probe_mode) return;
  rto_timer_ = sim_.schedule_in(rtt_.rto(), [this] { on_rto_expiry(); }, "rto");
}

void TransportSender::stop_rto_timer() {
  rto_timer_.cancel();
  rto_timer_ = {};
}

void TransportSender::grow_window() {
  if (state_.growth_frozen) return;
  double limit = static_cast<double>(state_.cwl);
  if (state_.cwnd < state_.ssthresh) {
    state_.cwnd += 1.0;
  } else {
    state_.cwnd += 1.0 / state_.cwnd;
  }
  state_.cwnd = std::min(state_.cwnd, limit);
}

void TransportSender::on_ack(const Segment& ack) {
  if (ack.kind != Segment::Kind::Ack || ack.flow != flow_) return;

  // Feedback first: an ACK that also acknowledges data ends any probe mode
  // the feedback may have started.
  if (ack.feedback) handle_feedback(*ack.feedback);

  if (!ack.feedback_only && !failed_) {
    if (state_.probe_mode) exit_probe_mode();

    if (ack.cum_ack > state_.snd_una && ack.cum_ack <= state_.next_seq) {
      std::uint64_t newly = ack.cum_ack - state_.snd_una;
      const Outstanding& last = outstanding_.at(newly - 1);
      if (!last.retransmitted) {
        rtt_.update(sim_.now() - last.sent);
        ++stats_.rtt_samples;
      }
      for (std::uint64_t i = 0; i < newly; ++i) {
        stats_.bytes_acked += outstanding_.front().payload.size();
        outstanding_.pop_front();
      }
      state_.snd_una = ack.cum_ack;
      state_.dupacks = 0;
      state_.backoffs = 0;
      grow_window();
      trace("ack", ack.cum_ack);
      if (outstanding_.empty()) {
        stop_rto_timer();
      } else {
        restart_rto_timer();
      }
    } else if (ack.cum_ack == state_.snd_una && state_.inflight() > 0) {
      ++stats_.duplicate_acks;
      ++state_.dupacks;
      if (state_.dupacks == config_.dupack_threshold) {
        ++stats_.fast_retransmits;
        state_.ssthresh = std::max(state_.cwnd / 2.0, 2.0);
        state_.cwnd = state_.ssthresh;
        trace("fast_retransmit", state_.snd_una);
        retransmit_earliest();
      }
    } else {
      ++stats_.stale_acks;
    }
  }

  try_send();
}

void TransportSender::handle_feedback(const Feedback& feedback) {
  if (feedback.interval_id <= last_feedback_interval_) return;
  last_feedback_interval_ = feedback.interval_id;
  if (failed_ || state_.probe_mode) return;
  state_.last_state = feedback.state;
  ++stats_.feedback_reactions;
  policy_->on_feedback(feedback, *this);
  trace("feedback", state_.snd_una);
}

void TransportSender::on_rto_expiry() {
  rto_timer_ = {};
  if (outstanding_.empty() || failed_ || state_.probe_mode) return;
  if (state_.backoffs >= config_.max_rto_backoffs) {
    failed_ = true;
    trace("failed", state_.snd_una);
    return;
  }
  ++state_.backoffs;
  ++stats_.timeouts;
  state_.ssthresh = std::max(state_.cwnd / 2.0, 2.0);
  state_.cwnd = 1.0;
  state_.dupacks = 0;
  rtt_.back_off();
  trace("timeout", state_.snd_una);
  retransmit_earliest();
  restart_rto_timer();
}

void TransportSender::enter_probe_mode(double probe_interval) {
  if (state_.probe_mode || failed_) return;
  probe_interval_ = probe_interval;
  state_.probe_mode = true;
  state_.frozen_cwnd = state_.cwnd;
  state_.frozen_ssthresh = state_.ssthresh;
  stop_rto_timer();
  trace("probe_mode", state_.snd_una);
  probe_timer_ = sim_.schedule_in(probe_interval_, [this] { probe(); }, "probe");
}

void TransportSender::probe() {
  if (!state_.probe_mode) return;
  if (!outstanding_.empty()) {
    retransmit_earliest();
  } else {
    // Nothing outstanding: the probe carries the next new segment.
    state_.probe_mode = false;
    double saved = state_.cwnd;
    state_.cwnd = 1.0;
    try_send();
    state_.cwnd = saved;
    state_.probe_mode = true;
    stop_rto_timer();
  }
  probe_timer_ = sim_.schedule_in(probe_interval_, [this] { probe(); }, "probe");
}

void TransportSender::exit_probe_mode() {
  state_.probe_mode = false;
  probe_timer_.cancel();
  state_.cwnd = state_.frozen_cwnd;
  state_.ssthresh = state_.frozen_ssthresh;
  trace("probe_exit", state_.snd_una);
  restart_rto_timer();
}

}  // namespace manet::transport
