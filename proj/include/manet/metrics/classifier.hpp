#pragma once

#include <cstddef>
#include <deque>

#include "manet/metrics/types.hpp"

namespace manet::metrics {

/// Sliding window of the last `capacity` samples of each metric.
class MetricHistory {
 public:
  explicit MetricHistory(std::size_t capacity = 20) : capacity_(capacity) {}

  void push(const MetricSample& sample);
  bool empty() const { return idd_.empty(); }
  std::size_t size() const { return idd_.size(); }
  std::size_t capacity() const { return capacity_; }

  double median_idd() const { return median(idd_); }
  double median_stt() const { return median(stt_); }
  double median_por() const { return median(por_); }
  double median_plr() const { return median(plr_); }

 private:
  static double median(const std::deque<double>& values);

  std::size_t capacity_;
  std::deque<double> idd_, stt_, por_, plr_;
};

/// HIGH: value > m + h|m|. LOW: value < m - h|m|. For m >= 0 these are the
/// (1 + h)m and (1 - h)m bands.
bool is_high(double value, double median, double h);
bool is_low(double value, double median, double h);

/// Priority-ordered rules: empty interval => Disconnected; IDD high with STT
/// low => Congested; POR high => RouteChange; PLR high => ChannelError;
/// otherwise Normal. With no history only the first rule can fire.
NetworkState classify_state(const MetricSample& sample, const MetricHistory& history,
                            double threshold = 0.3);

}  // namespace manet::metrics
