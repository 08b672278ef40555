#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "manet/net/geometry.hpp"
#include "manet/sim/simulator.hpp"
#include "manet/transport/rtt_estimator.hpp"
#include "manet/transport/segment.hpp"
#include "manet/transport/sender_state.hpp"

namespace manet::transport {

struct SenderConfig {
  std::uint32_t packet_size = 1000;  // payload bytes per DATA segment
  RttConfig rtt;
  std::uint32_t max_rto_backoffs = 12;
  double initial_ssthresh = 64.0;
  std::uint32_t dupack_threshold = 3;
};

struct TraceRecord {
  double time;
  const char* event;
  std::uint64_t seq;
  double cwnd;
  int cwl;
  double rto;
  metrics::NetworkState state;
};

struct SenderStats {
  std::uint64_t segments_sent = 0;
  std::uint64_t retransmissions = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t fast_retransmits = 0;
  std::uint64_t duplicate_acks = 0;
  std::uint64_t stale_acks = 0;
  std::uint64_t feedback_reactions = 0;
  std::uint64_t rtt_samples = 0;
  std::uint64_t bytes_acked = 0;
};

/// Reliable packet-windowed sender. Reno-style loss recovery; receiver
/// feedback is forwarded to the configured CongestionPolicy.
class TransportSender final : public SenderControl {
 public:
  using Transmit = std::function<void(Segment)>;
  /// Appends up to `max` bytes of application data to `out`; returns the count.
  using Source = std::function<std::size_t(std::vector<std::uint8_t>& out, std::size_t max)>;
  using TraceSink = std::function<void(const TraceRecord&)>;

  TransportSender(sim::Simulator& simulator, net::FlowId flow, SenderConfig config,
                  std::unique_ptr<CongestionPolicy> policy, Transmit transmit);
  ~TransportSender() override;

  /// Queues application bytes and emits segments while the window allows.
  /// Returns the number of segments emitted by this call.
  std::size_t send_data(std::span<const std::uint8_t> bytes);
  /// Pull-mode application data, consulted whenever the send buffer runs dry.
  void set_source(Source source);

  void on_ack(const Segment& ack);
  void on_rto_expiry();

  // SenderControl
  SenderState& state() override { return state_; }
  void retransmit_earliest() override;
  void restart_rto_timer() override;
  void enter_probe_mode(double probe_interval) override;

  const SenderState& state() const { return state_; }
  const RttEstimator& rtt() const { return rtt_; }
  const SenderStats& stats() const { return stats_; }
  const CongestionPolicy& policy() const { return *policy_; }
  net::FlowId flow() const { return flow_; }
  bool failed() const { return failed_; }
  std::size_t buffered_bytes() const { return buffer_.size() - head_; }
  bool rto_pending() const { return rto_timer_.valid() && !rto_timer_.cancelled(); }

  void set_trace(TraceSink sink) { trace_ = std::move(sink); }

 private:
  struct Outstanding {
    std::vector<std::uint8_t> payload;
    double sent = 0.0;
    bool retransmitted = false;
  };

  std::size_t try_send();
  void emit(std::uint64_t seq, bool retransmission);
  void stop_rto_timer();
  void exit_probe_mode();
  void probe();
  void handle_feedback(const Feedback& feedback);
  void grow_window();
  void trace(const char* event, std::uint64_t seq);

  sim::Simulator& sim_;
  net::FlowId flow_;
  SenderConfig config_;
  std::unique_ptr<CongestionPolicy> policy_;
  Transmit transmit_;
  Source source_;
  TraceSink trace_;

  SenderState state_;
  RttEstimator rtt_;
  SenderStats stats_;
  std::vector<std::uint8_t> buffer_;
  std::size_t head_ = 0;
  std::deque<Outstanding> outstanding_;  // index = seq - snd_una
  sim::EventHandle rto_timer_;
  sim::EventHandle probe_timer_;
  double probe_interval_ = 2.0;
  std::int64_t last_feedback_interval_ = -1;
  bool failed_ = false;
};

}  // namespace manet::transport
