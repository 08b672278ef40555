#include "manet/sim/simulator.hpp"

#include <stdexcept>
#include <string>

namespace manet::sim {

EventHandle Simulator::schedule(SimTime at, Action action, std::string_view label) {
  if (at < now_) {
    throw std::invalid_argument("cannot schedule event at t=" + std::to_string(at) +
                                " before current time " + std::to_string(now_));
  }
  auto flag = std::make_shared<bool>(false);
  queue_.push(Entry{at, next_seq_++, label, std::move(action), flag});
  return EventHandle(std::move(flag));
}

std::size_t Simulator::run_until(SimTime t_end) {
  if (t_end < now_) {
    throw std::invalid_argument("run_until target precedes current time");
  }
  std::size_t dispatched = 0;
  while (!queue_.empty() && queue_.top().fire_at <= t_end) {
    // priority_queue::top is const; the entry is discarded right after.
    Entry entry = std::move(const_cast<Entry&>(queue_.top()));
    queue_.pop();
    if (*entry.cancelled) continue;
    now_ = entry.fire_at;
    if (log_enabled_) log_.push_back({entry.fire_at, entry.seq, entry.label});
    ++dispatched;
    entry.action();
  }
  now_ = t_end;
  return dispatched;
}

}  // namespace manet::sim
