#include "manet/harness/sources.hpp"

#include <cmath>

namespace manet::harness {

CbrSource::CbrSource(sim::Simulator& simulator, const FlowConfig& flow, double run_end, Emit emit)
    : sim_(simulator),
      start_(flow.start),
      stop_(flow.stop < 0 ? run_end : std::min(flow.stop, run_end)),
      spacing_(spacing(flow.rate, flow.packet_size)),
      emit_(std::move(emit)) {}

double CbrSource::spacing(double rate_bps, std::uint32_t packet_size) {
  return static_cast<double>(packet_size) * 8.0 / rate_bps;
}

void CbrSource::start() {
  if (start_ + spacing_ <= stop_) sim_.schedule(start_, [this] { fire(); }, "cbr");
}

void CbrSource::fire() {
  emit_();
  ++emitted_;
  // Times derive from the packet index so spacing errors never accumulate.
  double next = start_ + static_cast<double>(emitted_) * spacing_;
  if (next + spacing_ <= stop_) sim_.schedule(next, [this] { fire(); }, "cbr");
}

std::uint8_t PatternStream::byte_at(std::uint64_t offset) {
  std::uint64_t x = offset * 0x9e3779b97f4a7c15ULL;
  x ^= x >> 29;
  return static_cast<std::uint8_t>(x >> 24);
}

std::size_t PatternStream::fill(std::vector<std::uint8_t>& out, std::size_t max) {
  out.reserve(out.size() + max);
  for (std::size_t i = 0; i < max; ++i) out.push_back(byte_at(produced_ + i));
  produced_ += max;
  return max;
}

void PatternVerifier::consume(std::span<const std::uint8_t> bytes) {
  for (std::uint8_t b : bytes) {
    if (b != PatternStream::byte_at(offset_)) ++mismatches_;
    ++offset_;
  }
}

}  // namespace manet::harness
