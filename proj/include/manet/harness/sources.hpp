#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "manet/harness/scenario.hpp"
#include "manet/sim/simulator.hpp"

namespace manet::harness {

/// Fixed-rate datagram source. Packet k leaves at start + k * spacing and is
/// emitted only if its whole slot fits before the stop time.
class CbrSource {
 public:
  using Emit = std::function<void()>;

  CbrSource(sim::Simulator& simulator, const FlowConfig& flow, double run_end, Emit emit);

  /// Seconds between packets: size * 8 / rate.
  static double spacing(double rate_bps, std::uint32_t packet_size);

  void start();
  std::uint64_t emitted() const { return emitted_; }

 private:
  void fire();

  sim::Simulator& sim_;
  double start_;
  double stop_;
  double spacing_;
  Emit emit_;
  std::uint64_t emitted_ = 0;
};

/// Deterministic, unbounded byte stream used as bulk (FTP) application data.
class PatternStream {
 public:
  static std::uint8_t byte_at(std::uint64_t offset);

  /// Greedy pull: always appends `max` bytes.
  std::size_t fill(std::vector<std::uint8_t>& out, std::size_t max);
  std::uint64_t produced() const { return produced_; }

 private:
  std::uint64_t produced_ = 0;
};

/// Checks released bytes against the PatternStream prefix.
class PatternVerifier {
 public:
  void consume(std::span<const std::uint8_t> bytes);
  std::uint64_t bytes() const { return offset_; }
  std::uint64_t mismatches() const { return mismatches_; }

 private:
  std::uint64_t offset_ = 0;
  std::uint64_t mismatches_ = 0;
};

}  // namespace manet::harness
