#include "support/metric_oracle.hpp"

#include <algorithm>
#include <map>

namespace oracle {

double idd_from_pairs(const std::map<std::uint64_t, Arrival>& table, std::uint64_t st,
                      std::uint64_t ed, manet::metrics::IddDivisor divisor) {
  double sum = 0.0;
  std::size_t valid = 0;
  for (std::uint64_t i = st; i < ed; ++i) {
    auto a = table.find(i);
    auto b = table.find(i + 1);
    if (a == table.end() || b == table.end()) continue;
    sum += (b->second.arrived - a->second.arrived) - (b->second.sent - a->second.sent);
    ++valid;
  }
  if (divisor == manet::metrics::IddDivisor::Literal) return sum / static_cast<double>(ed - st + 1);
  return valid ? sum / static_cast<double>(valid) : 0.0;
}

std::vector<BatchSample> batch_metrics(const std::vector<Arrival>& arrivals, double delta, double start,
                                       std::size_t count, manet::metrics::IddDivisor divisor) {
  std::vector<BatchSample> out;
  std::map<std::uint64_t, Arrival> table;  // latest arrival per seq so far
  std::uint64_t highest = 0;
  const Arrival* previous = nullptr;
  std::size_t next = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double hi = start + static_cast<double>(k + 1) * delta;
    const std::uint64_t highest_before = highest;

    std::vector<const Arrival*> inside;
    double gap_sum = 0.0;
    std::size_t gaps = 0;
    for (; next < arrivals.size() && arrivals[next].arrived < hi; ++next) {
      const Arrival& a = arrivals[next];
      table[a.seq] = a;
      highest = std::max(highest, a.seq);
      inside.push_back(&a);
      if (previous) {
        gap_sum += a.arrived - previous->arrived;
        ++gaps;
      }
      previous = &a;
    }

    BatchSample s{};
    s.id = static_cast<std::int64_t>(k);
    s.n_p = inside.size();
    s.stt = static_cast<double>(inside.size()) / delta;
    if (!inside.empty()) {
      std::uint64_t st = inside.front()->seq, ed = inside.front()->seq;
      std::size_t jumps = 0;
      for (std::size_t i = 0; i < inside.size(); ++i) {
        st = std::min(st, inside[i]->seq);
        ed = std::max(ed, inside[i]->seq);
        if (i > 0 && inside[i]->seq > inside[i - 1]->seq + 1) ++jumps;
      }
      s.idd = idd_from_pairs(table, st, ed, divisor);
      s.por = static_cast<double>(jumps) / static_cast<double>(inside.size());
    }
    if (highest > highest_before) {
      double expected = static_cast<double>(highest - highest_before);
      s.plr = std::clamp((expected - static_cast<double>(inside.size())) / expected, 0.0, 1.0);
    }
    s.iad = gaps ? gap_sum / static_cast<double>(gaps) : 0.0;
    out.push_back(s);
  }
  return out;
}

std::vector<Arrival> random_trace(manet::sim::RngStream& rng, std::size_t max_packets) {
  const std::size_t n = 1 + rng.below(max_packets);
  const double loss = rng.uniform(0.0, 0.3);
  const double retransmit = rng.uniform(0.0, 0.8);
  const double jitter = rng.uniform(0.0, 0.2);
  const double spacing = rng.uniform(0.005, 0.2);
  std::vector<Arrival> out;
  double t = rng.uniform(0.0, 0.5);
  for (std::uint64_t seq = 1; seq <= n; ++seq) {
    t += spacing * rng.uniform(0.2, 1.8);
    double delay = 0.01 + rng.uniform(0.0, jitter);
    std::uint32_t size = 500 + static_cast<std::uint32_t>(rng.below(1000));
    if (!rng.bernoulli(loss)) out.push_back({seq, t, t + delay, size});
    if (rng.bernoulli(loss * retransmit)) {
      double resend = t + rng.uniform(0.1, 3.0);
      out.push_back({seq, resend, resend + 0.01 + rng.uniform(0.0, jitter), size});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Arrival& a, const Arrival& b) { return a.arrived < b.arrived; });
  return out;
}

}  // namespace oracle
