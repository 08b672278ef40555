#include "manet/metrics/interval_metrics.hpp"

#include <stdexcept>

namespace manet::metrics {

MetricSample MetricSmoother::push(const MetricSample& sample) {
  recent_.push_back(sample);
  if (recent_.size() > window_) recent_.pop_front();
  MetricSample out = sample;
  out.idd = out.stt = out.por = out.plr = out.iad = 0.0;
  for (const auto& s : recent_) {
    out.idd += s.idd;
    out.stt += s.stt;
    out.por += s.por;
    out.plr += s.plr;
    out.iad += s.iad;
  }
  double n = static_cast<double>(recent_.size());
  out.idd /= n;
  out.stt /= n;
  out.por /= n;
  out.plr /= n;
  out.iad /= n;
  return out;
}

IntervalMetrics::IntervalMetrics(MetricsConfig config)
    : config_(config), history_(config.history), smoother_(config.smoothing) {
  if (!(config_.delta > 0)) throw std::invalid_argument("interval length must be positive");
  open(0);
}

void IntervalMetrics::open(std::int64_t id) {
  current_ = Interval{};
  current_.id = id;
  current_.start = config_.start + static_cast<double>(id) * config_.delta;
  current_.delta = config_.delta;
  current_.highest_at_start = highest_;
  current_.highest = highest_;
}

const Interval& IntervalMetrics::record_packet(Seq seq, double sent, double arrived,
                                               std::uint32_t size) {
  records_.put({seq, sent, arrived, size});
  auto& iv = current_;
  if (iv.n_p == 0) {
    iv.first_seq = iv.last_seq = seq;
  } else {
    iv.first_seq = std::min(iv.first_seq, seq);
    iv.last_seq = std::max(iv.last_seq, seq);
  }
  if (iv.prev_seq && seq > *iv.prev_seq + 1) ++iv.n_po;
  iv.prev_seq = seq;
  ++iv.n_p;
  iv.bytes += size;
  if (last_arrival_) {
    iv.gap_sum += arrived - *last_arrival_;
    ++iv.gap_count;
  }
  last_arrival_ = arrived;
  if (seq > highest_) highest_ = seq;
  iv.highest = highest_;
  return iv;
}

ClosedInterval IntervalMetrics::close_interval(double now) {
  if (now < current_.end()) throw std::logic_error("interval closed before its end");
  const auto& iv = current_;
  MetricSample s;
  s.interval_id = iv.id;
  s.start = iv.start;
  s.end = iv.end();
  s.n_p = iv.n_p;
  s.idd = iv.n_p == 0 ? 0.0 : compute_idd(records_, iv.first_seq, iv.last_seq, config_.divisor);
  s.stt = compute_stt(iv);
  s.por = compute_por(iv);
  s.plr = compute_plr(iv);
  s.iad_count = iv.gap_count;
  s.iad = iv.gap_count == 0 ? 0.0 : iv.gap_sum / static_cast<double>(iv.gap_count);

  ClosedInterval out;
  out.sample = s;
  out.smoothed = smoother_.push(s);
  if (config_.forced_state) {
    out.state = *config_.forced_state;
  } else {
    out.state = classify_state(out.smoothed, history_, config_.threshold);
  }
  if (s.n_p > 0) history_.push(out.smoothed);
  open(iv.id + 1);
  return out;
}

}  // namespace manet::metrics
