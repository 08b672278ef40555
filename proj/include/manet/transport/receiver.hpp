#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "manet/metrics/interval_metrics.hpp"
#include "manet/net/geometry.hpp"
#include "manet/sim/simulator.hpp"
#include "manet/transport/segment.hpp"

namespace manet::transport {

struct ReceiverStats {
  std::uint64_t data_segments = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t acks_sent = 0;
  std::uint64_t feedback_sent = 0;
  std::uint64_t bytes_released = 0;
};

/// In-order reassembly plus the per-interval metric engine. Every DATA
/// segment is acknowledged immediately with the latest feedback attached.
class TransportReceiver {
 public:
  using Transmit = std::function<void(Segment)>;
  using Sink = std::function<void(std::span<const std::uint8_t>)>;
  using IntervalSink = std::function<void(const metrics::ClosedInterval&)>;

  TransportReceiver(sim::Simulator& simulator, net::FlowId flow, metrics::MetricsConfig config,
                    Transmit transmit, Sink sink = {});
  ~TransportReceiver();
  TransportReceiver(const TransportReceiver&) = delete;
  TransportReceiver& operator=(const TransportReceiver&) = delete;

  /// Schedules interval closes at every boundary of the metric grid.
  void start();

  /// Buffers the segment, releases the in-sequence prefix and acknowledges.
  /// Returns the number of bytes released to the application.
  std::size_t on_data(const Segment& segment);

  void set_interval_sink(IntervalSink sink) { interval_sink_ = std::move(sink); }

  std::uint64_t expected_seq() const { return expected_; }
  const std::optional<Feedback>& feedback() const { return feedback_; }
  const metrics::IntervalMetrics& metrics() const { return metrics_; }
  const ReceiverStats& stats() const { return stats_; }

 private:
  void close_due(double now);
  void close_one();
  void send_ack(bool feedback_only);

  sim::Simulator& sim_;
  net::FlowId flow_;
  Transmit transmit_;
  Sink sink_;
  IntervalSink interval_sink_;
  metrics::IntervalMetrics metrics_;
  std::uint64_t expected_ = 1;
  std::map<std::uint64_t, std::vector<std::uint8_t>> reorder_;
  std::optional<Feedback> feedback_;
  sim::EventHandle timer_;
  ReceiverStats stats_;
};

}  // namespace manet::transport
