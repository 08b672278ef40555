#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "manet/metrics/interval_metrics.hpp"
#include "manet/net/network.hpp"
#include "manet/policy/policies.hpp"
#include "manet/transport/sender.hpp"

namespace manet::harness {

enum class FlowKind : std::uint8_t { Cbr, Ftp };

struct FlowConfig {
  net::FlowId id = 0;
  FlowKind kind = FlowKind::Ftp;
  net::NodeId src = 0;
  net::NodeId dst = 0;
  double rate = 0.0;               // bits/s, CBR only
  std::uint32_t packet_size = 1000;  // bytes (payload for FTP)
  transport::PolicyKind policy = transport::PolicyKind::Madtcp;
  double start = 0.0;
  double stop = -1.0;  // negative: until the end of the run
};

/// Complete experiment configuration. Defaults reproduce the reference
/// setting: 5 nodes on 670 m x 670 m, 250 m range, 2 Mbps, 4 m/s random
/// waypoint, 150 s, CBR 0->3 at 1 Mbps and 3->4 at 0.75 Mbps (1500 B), FTP
/// 1->2 over M-ADTCP.
struct Scenario {
  net::NetworkConfig network;
  std::vector<net::Position> positions;  // empty: uniform random placement
  std::vector<FlowConfig> flows;
  policy::PolicyConfig policy;
  metrics::MetricsConfig metrics;
  transport::SenderConfig transport;
  std::uint32_t header_bytes = 40;  // transport/IP header on DATA, and ACK size
  double duration = 150.0;
  double window_start = 100.0;
  double window_end = 150.0;
  std::size_t iterations = 1;
  std::uint64_t seed = 1;

  /// Throws ScenarioError naming the offending key.
  void validate() const;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& message, int line = 0, std::string key = {});
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

Scenario default_scenario();
std::vector<FlowConfig> default_flows();

/// Parses the sectioned key=value format. Unspecified keys keep defaults;
/// an absent flow list means the default flows.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace manet::harness
