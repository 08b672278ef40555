#include "manet/metrics/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace manet::metrics {

const char* to_string(NetworkState state) {
  switch (state) {
    case NetworkState::Normal: return "NORMAL";
    case NetworkState::Congested: return "CONGESTED";
    case NetworkState::RouteChange: return "ROUTE_CHANGE";
    case NetworkState::ChannelError: return "CHANNEL_ERROR";
    case NetworkState::Disconnected: return "DISCONNECTED";
  }
  return "UNKNOWN";
}

std::optional<NetworkState> parse_network_state(std::string_view text) {
  for (auto s : {NetworkState::Normal, NetworkState::Congested, NetworkState::RouteChange,
                 NetworkState::ChannelError, NetworkState::Disconnected}) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

void MetricHistory::push(const MetricSample& sample) {
  auto add = [this](std::deque<double>& q, double v) {
    q.push_back(v);
    if (q.size() > capacity_) q.pop_front();
  };
  add(idd_, sample.idd);
  add(stt_, sample.stt);
  add(por_, sample.por);
  add(plr_, sample.plr);
}

double MetricHistory::median(const std::deque<double>& values) {
  if (values.empty()) return 0.0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t mid = sorted.size() / 2;
  if (sorted.size() % 2 == 1) return sorted[mid];
  return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

bool is_high(double value, double median, double h) { return value > median + h * std::abs(median); }
bool is_low(double value, double median, double h) { return value < median - h * std::abs(median); }

NetworkState classify_state(const MetricSample& sample, const MetricHistory& history,
                            double threshold) {
  if (sample.n_p == 0) return NetworkState::Disconnected;
  if (history.empty()) return NetworkState::Normal;
  if (is_high(sample.idd, history.median_idd(), threshold) &&
      is_low(sample.stt, history.median_stt(), threshold)) {
    return NetworkState::Congested;
  }
  if (is_high(sample.por, history.median_por(), threshold)) return NetworkState::RouteChange;
  if (is_high(sample.plr, history.median_plr(), threshold)) return NetworkState::ChannelError;
  return NetworkState::Normal;
}

}  // namespace manet::metrics
