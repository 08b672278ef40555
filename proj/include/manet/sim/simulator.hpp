#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <string_view>
#include <vector>

namespace manet::sim {

/// Virtual time in seconds.
using SimTime = double;

/// Handle returned by Simulator::schedule. Cancelling an event that already
/// fired is a no-op.
class EventHandle {
 public:
  EventHandle() = default;

  void cancel() const {
    if (cancelled_) *cancelled_ = true;
  }
  bool valid() const { return cancelled_ != nullptr; }
  bool cancelled() const { return cancelled_ && *cancelled_; }

 private:
  friend class Simulator;
  explicit EventHandle(std::shared_ptr<bool> flag) : cancelled_(std::move(flag)) {}
  std::shared_ptr<bool> cancelled_;
};

struct DispatchRecord {
  SimTime time;
  std::uint64_t seq;
  std::string_view label;

  bool operator==(const DispatchRecord&) const = default;
};

/// Single-threaded discrete-event engine. Events with equal fire time are
/// dispatched in the order they were scheduled.
class Simulator {
 public:
  using Action = std::function<void()>;

  Simulator() = default;
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  SimTime now() const { return now_; }

  /// Throws std::invalid_argument when `at` lies before the current clock.
  EventHandle schedule(SimTime at, Action action, std::string_view label = "event");
  EventHandle schedule_in(SimTime delay, Action action, std::string_view label = "event") {
    return schedule(now_ + delay, std::move(action), label);
  }

  /// Dispatches every pending event with fire time <= t_end, then advances the
  /// clock to t_end. Returns the number of events dispatched (cancelled events
  /// are skipped and not counted).
  std::size_t run_until(SimTime t_end);

  std::size_t pending() const { return queue_.size(); }

  /// Records (time, seq, label) of every dispatched event. Labels must outlive
  /// the simulator; string literals are the expected use.
  void enable_dispatch_log(bool on) { log_enabled_ = on; }
  const std::vector<DispatchRecord>& dispatch_log() const { return log_; }

 private:
  struct Entry {
    SimTime fire_at;
    std::uint64_t seq;
    std::string_view label;
    Action action;
    std::shared_ptr<bool> cancelled;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  SimTime now_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  bool log_enabled_ = false;
  std::vector<DispatchRecord> log_;
};

}  // namespace manet::sim
