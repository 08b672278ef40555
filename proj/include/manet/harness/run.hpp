#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "manet/harness/scenario.hpp"
#include "manet/metrics/types.hpp"
#include "manet/net/network.hpp"
#include "manet/sim/simulator.hpp"
#include "manet/transport/sender.hpp"

namespace manet::harness {

struct RunOptions {
  bool trace = false;          // sender trace rows
  bool topology = false;       // node positions at every mobility step
  bool dispatch_log = false;   // full engine dispatch log
  bool packet_log = false;     // per-packet lifecycle events
  /// Replaces the policy of every FTP flow (used by `compare`).
  std::optional<transport::PolicyKind> policy_override;
};

/// Per-interval metric log of one transport flow.
struct FlowIntervals {
  net::FlowId flow = 0;
  transport::PolicyKind policy = transport::PolicyKind::Tcp;
  std::vector<metrics::MetricSample> samples;
  std::vector<metrics::NetworkState> states;
};

/// Means over the measurement window of one flow.
struct FlowSummary {
  net::FlowId flow = 0;
  transport::PolicyKind policy = transport::PolicyKind::Tcp;
  std::size_t intervals = 0;
  std::optional<double> iad;  // none when no inter-arrival gap fell in the window
  double idd = 0.0;
  double por = 0.0;
  double stt = 0.0;
};

struct ConservationAudit {
  net::FlowId flow = 0;
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_flight = 0;

  bool holds() const { return sent == delivered + dropped + in_flight; }
};

/// Application-level byte accounting of one transport flow.
struct StreamCheck {
  net::FlowId flow = 0;
  std::uint64_t bytes_released = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t bytes_acked = 0;
};

struct TraceRow {
  net::FlowId flow;
  transport::TraceRecord record;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::string label;  // policy override name, or "scenario"
  bool failed = false;
  std::string failure;
  std::vector<FlowIntervals> intervals;
  std::vector<FlowSummary> summaries;
  std::vector<ConservationAudit> audits;
  std::vector<StreamCheck> streams;
  std::vector<transport::SenderStats> sender_stats;
  std::vector<TraceRow> trace;
  std::vector<net::TopologySample> topology;
  std::vector<net::LinkBreak> link_breaks;
  std::vector<sim::DispatchRecord> dispatch_log;
  std::vector<net::PacketEvent> packet_log;
  std::size_t events = 0;
};

FlowSummary summarize(const FlowIntervals& flow, double window_start, double window_end);

/// One simulation of `scenario` with the given seed. Never throws for
/// simulation failures; they are reported through RunResult::failed.
RunResult run_once(const Scenario& scenario, std::uint64_t seed, const RunOptions& options = {});

/// Runs iteration i with seed base_seed + i. Results are in iteration order
/// regardless of `jobs`.
std::vector<RunResult> run_experiment(const Scenario& scenario, std::size_t iterations,
                                      std::uint64_t base_seed, const RunOptions& options = {},
                                      unsigned jobs = 1);

}  // namespace manet::harness
