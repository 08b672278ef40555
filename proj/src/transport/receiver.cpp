#include "manet/transport/receiver.hpp"

namespace manet::transport {

TransportReceiver::TransportReceiver(sim::Simulator& simulator, net::FlowId flow,
                                     metrics::MetricsConfig config, Transmit transmit, Sink sink)
    : sim_(simulator),
      flow_(flow),
      transmit_(std::move(transmit)),
      sink_(std::move(sink)),
      metrics_(config) {}

TransportReceiver::~TransportReceiver() { timer_.cancel(); }

void TransportReceiver::start() {
  timer_ = sim_.schedule(metrics_.next_boundary(), [this] { close_one(); }, "interval_close");
}

void TransportReceiver::close_one() {
  close_due(sim_.now());
  timer_ = sim_.schedule(metrics_.next_boundary(), [this] { close_one(); }, "interval_close");
}

void TransportReceiver::close_due(double now) {
  while (now >= metrics_.next_boundary()) {
    auto closed = metrics_.close_interval(now);
    feedback_ = Feedback{closed.sample.interval_id, closed.state, closed.smoothed};
    if (interval_sink_) interval_sink_(closed);
    if (closed.sample.n_p == 0) send_ack(true);
  }
}

std::size_t TransportReceiver::on_data(const Segment& segment) {
  if (segment.kind != Segment::Kind::Data || segment.flow != flow_) return 0;
  const double now = sim_.now();
  close_due(now);
  ++stats_.data_segments;
  metrics_.record_packet(segment.seq, segment.send_time, now,
                         static_cast<std::uint32_t>(segment.payload.size()));

  std::size_t released = 0;
  if (segment.seq < expected_ || reorder_.count(segment.seq) > 0) {
    ++stats_.duplicates;
  } else if (segment.seq > expected_) {
    reorder_.emplace(segment.seq, segment.payload);
  } else {
    if (sink_) sink_(segment.payload);
    released += segment.payload.size();
    ++expected_;
    for (auto it = reorder_.begin(); it != reorder_.end() && it->first == expected_;) {
      if (sink_) sink_(it->second);
      released += it->second.size();
      ++expected_;
      it = reorder_.erase(it);
    }
  }
  stats_.bytes_released += released;
  send_ack(false);
  return released;
}

void TransportReceiver::send_ack(bool feedback_only) {
  Segment ack;
  ack.flow = flow_;
  ack.kind = Segment::Kind::Ack;
  ack.seq = 0;
  ack.send_time = sim_.now();
  ack.cum_ack = expected_;
  ack.feedback_only = feedback_only;
  ack.feedback = feedback_;
  if (feedback_only) {
    ++stats_.feedback_sent;
  } else {
    ++stats_.acks_sent;
  }
  transmit_(std::move(ack));
}

}  // namespace manet::transport
