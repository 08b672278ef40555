#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace manet::metrics {

using Seq = std::uint64_t;

/// Receiver's view of the path, carried back to the sender on ACKs.
enum class NetworkState : std::uint8_t { Normal, Congested, RouteChange, ChannelError, Disconnected };

const char* to_string(NetworkState state);
std::optional<NetworkState> parse_network_state(std::string_view text);

/// Send and arrival timestamps of one data packet.
struct PacketRecord {
  Seq seq = 0;
  double sent = 0.0;     // S_i, stamped by the sender
  double arrived = 0.0;  // A_i
  std::uint32_t size = 0;
};

/// Counters of one measurement interval [start, start + delta).
struct Interval {
  std::int64_t id = 0;
  double start = 0.0;
  double delta = 0.9;
  std::uint64_t n_p = 0;   // packets received
  std::uint64_t n_po = 0;  // received with a sequence jump > 1
  std::uint64_t bytes = 0;
  Seq first_seq = 0;  // smallest seq received in the interval
  Seq last_seq = 0;   // largest seq received in the interval
  std::optional<Seq> prev_seq;  // previous arrival within this interval
  Seq highest_at_start = 0;
  Seq highest = 0;
  double gap_sum = 0.0;  // inter-arrival gaps of packets arriving in the interval
  std::uint64_t gap_count = 0;

  double end() const { return start + delta; }
  std::uint64_t lost() const {
    std::uint64_t expected = highest - highest_at_start;
    return expected > n_p ? expected - n_p : 0;
  }
};

/// Metrics of one closed interval.
struct MetricSample {
  std::int64_t interval_id = 0;
  double start = 0.0;
  double end = 0.0;
  std::uint64_t n_p = 0;
  double idd = 0.0;  // s
  double stt = 0.0;  // packets/s
  double por = 0.0;
  double plr = 0.0;
  double iad = 0.0;  // mean inter-arrival gap, s (0 with no gap)
  std::uint64_t iad_count = 0;
};

enum class IddDivisor : std::uint8_t {
  Literal,     // (ed - st + 1), as in the original algorithm
  ValidPairs,  // number of pairs that contributed
};

}  // namespace manet::metrics
