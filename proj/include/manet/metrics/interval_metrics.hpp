#pragma once

#include <deque>
#include <optional>

#include "manet/metrics/classifier.hpp"
#include "manet/metrics/records.hpp"
#include "manet/metrics/types.hpp"

namespace manet::metrics {

struct MetricsConfig {
  double delta = 0.9;       // interval length, s
  double start = 0.0;       // flow start; intervals tile [start, inf)
  IddDivisor divisor = IddDivisor::Literal;
  std::size_t history = 20;
  double threshold = 0.3;
  std::size_t smoothing = 1;  // samples averaged before classification
  std::optional<NetworkState> forced_state;  // overrides classification
};

struct ClosedInterval {
  MetricSample sample;     // raw per-interval values
  MetricSample smoothed;   // average over the smoothing window
  NetworkState state = NetworkState::Normal;
};

/// Averages the last `window` samples' IDD, STT, POR, PLR and IAD.
class MetricSmoother {
 public:
  explicit MetricSmoother(std::size_t window = 1) : window_(window == 0 ? 1 : window) {}
  MetricSample push(const MetricSample& sample);

 private:
  std::size_t window_;
  std::deque<MetricSample> recent_;
};

/// Streaming receiver-side metric engine. Packets are recorded as they
/// arrive; close_interval() turns the current interval's counters into a
/// sample, classifies it and opens the next interval.
class IntervalMetrics {
 public:
  explicit IntervalMetrics(MetricsConfig config = {});

  const Interval& record_packet(Seq seq, double sent, double arrived, std::uint32_t size);

  /// Requires now >= current().end().
  ClosedInterval close_interval(double now);

  const Interval& current() const { return current_; }
  double next_boundary() const { return current_.end(); }
  const MetricHistory& history() const { return history_; }
  const RecordTable& records() const { return records_; }
  const MetricsConfig& config() const { return config_; }

 private:
  void open(std::int64_t id);

  MetricsConfig config_;
  RecordTable records_;
  MetricHistory history_;
  MetricSmoother smoother_;
  Interval current_;
  Seq highest_ = 0;
  std::optional<double> last_arrival_;
};

}  // namespace manet::metrics
