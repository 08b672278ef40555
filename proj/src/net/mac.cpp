#include "manet/net/mac.hpp"

#include <algorithm>
#include <cmath>

namespace manet::net {

double MacModel::collision_probability(std::uint32_t contenders) const {
  if (contenders <= 1) return 0.0;
  return 1.0 - std::pow(1.0 - config_.base_collision, static_cast<double>(contenders - 1));
}

double MacModel::backoff(std::uint32_t failures, sim::RngStream& rng) const {
  std::uint64_t cw = config_.cw_min;
  for (std::uint32_t i = 0; i < failures && cw < config_.cw_max; ++i) cw = cw * 2 + 1;
  cw = std::min<std::uint64_t>(cw, config_.cw_max);
  return static_cast<double>(rng.below(cw + 1)) * config_.slot_time;
}

MacOutcome MacModel::transmit(Frame& frame, double p_collision, sim::RngStream& rng) const {
  MacOutcome out;
  frame.attempt = 0;
  while (frame.attempt < config_.retry_limit) {
    if (frame.attempt > 0) out.delay += backoff(frame.attempt, rng);
    ++frame.attempt;
    out.delay += attempt_duration(frame.size);
    if (!rng.bernoulli(p_collision)) {
      out.result = MacResult::Delivered;
      out.attempts = frame.attempt;
      return out;
    }
  }
  out.result = MacResult::Dropped;
  out.attempts = frame.attempt;
  return out;
}

}  // namespace manet::net
