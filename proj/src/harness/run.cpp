#include "manet/harness/run.hpp"

#include <atomic>
#include <memory>
#include <thread>

#include "manet/harness/sources.hpp"
#include "manet/policy/policies.hpp"
#include "manet/transport/receiver.hpp"

namespace manet::harness {

namespace {

struct TransportFlow {
  FlowConfig config;
  std::unique_ptr<transport::TransportSender> sender;
  std::unique_ptr<transport::TransportReceiver> receiver;
  PatternStream source;
  PatternVerifier verifier;
  FlowIntervals log;
};

}  // namespace

FlowSummary summarize(const FlowIntervals& flow, double window_start, double window_end) {
  FlowSummary s;
  s.flow = flow.flow;
  s.policy = flow.policy;
  double gap_sum = 0.0;
  std::uint64_t gaps = 0;
  for (const auto& sample : flow.samples) {
    if (sample.start < window_start || sample.start >= window_end) continue;
    ++s.intervals;
    s.idd += sample.idd;
    s.por += sample.por;
    s.stt += sample.stt;
    gap_sum += sample.iad * static_cast<double>(sample.iad_count);
    gaps += sample.iad_count;
  }
  if (s.intervals > 0) {
    double n = static_cast<double>(s.intervals);
    s.idd /= n;
    s.por /= n;
    s.stt /= n;
  }
  if (gaps > 0) s.iad = gap_sum / static_cast<double>(gaps);
  return s;
}

RunResult run_once(const Scenario& scenario, std::uint64_t seed, const RunOptions& options) {
  RunResult result;
  result.seed = seed;
  result.label = options.policy_override ? transport::to_string(*options.policy_override) : "scenario";
  try {
    sim::Simulator simulator;
    simulator.enable_dispatch_log(options.dispatch_log);

    std::vector<net::Position> initial = scenario.positions;
    if (initial.empty()) {
      auto rng = sim::RngStream::derive(seed, "placement");
      initial = net::RandomWaypoint::random_placement(scenario.network.mobility,
                                                      scenario.network.node_count, rng);
    }
    net::Network network(simulator, scenario.network, initial, seed);
    network.enable_topology_log(options.topology);
    network.enable_packet_log(options.packet_log);

    std::vector<std::unique_ptr<CbrSource>> cbr_sources;
    std::vector<std::unique_ptr<TransportFlow>> flows;

    for (const auto& fc : scenario.flows) {
      if (fc.kind == FlowKind::Cbr) {
        auto emit = [&network, fc] {
          net::Packet p;
          p.flow = fc.id;
          p.src = fc.src;
          p.dst = fc.dst;
          p.size = fc.packet_size;
          network.send(std::move(p));
        };
        cbr_sources.push_back(std::make_unique<CbrSource>(simulator, fc, scenario.duration, emit));
        continue;
      }

      auto flow = std::make_unique<TransportFlow>();
      flow->config = fc;
      if (options.policy_override) flow->config.policy = *options.policy_override;
      flow->log.flow = fc.id;
      flow->log.policy = flow->config.policy;

      policy::PolicyConfig pc = scenario.policy;
      pc.kind = flow->config.policy;
      transport::SenderConfig sc = scenario.transport;
      sc.packet_size = fc.packet_size;
      const std::uint32_t header = scenario.header_bytes;

      auto to_network = [&network, header](net::NodeId from, net::NodeId to) {
        return [&network, header, from, to](transport::Segment seg) {
          net::Packet p;
          p.flow = seg.flow;
          p.src = from;
          p.dst = to;
          p.size = static_cast<std::uint32_t>(seg.payload.size()) + header;
          p.segment = std::make_shared<const transport::Segment>(std::move(seg));
          network.send(std::move(p));
        };
      };

      flow->sender = std::make_unique<transport::TransportSender>(
          simulator, fc.id, sc, policy::make_policy(pc), to_network(fc.src, fc.dst));
      metrics::MetricsConfig mc = scenario.metrics;
      mc.start = fc.start;
      TransportFlow* raw = flow.get();
      flow->receiver = std::make_unique<transport::TransportReceiver>(
          simulator, fc.id, mc, to_network(fc.dst, fc.src),
          [raw](std::span<const std::uint8_t> bytes) { raw->verifier.consume(bytes); });
      flow->receiver->set_interval_sink([raw](const metrics::ClosedInterval& closed) {
        raw->log.samples.push_back(closed.sample);
        raw->log.states.push_back(closed.state);
      });
      if (options.trace) {
        flow->sender->set_trace([&result, id = fc.id](const transport::TraceRecord& r) {
          result.trace.push_back({id, r});
        });
      }

      network.set_handler(fc.id, fc.dst, [raw](net::Packet&& p) {
        if (p.segment) raw->receiver->on_data(*p.segment);
      });
      network.set_handler(fc.id, fc.src, [raw](net::Packet&& p) {
        if (p.segment) raw->sender->on_ack(*p.segment);
      });
      flows.push_back(std::move(flow));
    }

    network.start();
    for (auto& src : cbr_sources) src->start();
    for (auto& flow : flows) {
      TransportFlow* raw = flow.get();
      simulator.schedule(raw->config.start, [raw] {
        raw->receiver->start();
        raw->sender->set_source([raw](std::vector<std::uint8_t>& out, std::size_t max) {
          return raw->source.fill(out, max);
        });
      }, "flow_start");
    }

    result.events = simulator.run_until(scenario.duration);

    for (const auto& fc : scenario.flows) {
      const auto& c = network.counters(fc.id);
      result.audits.push_back({fc.id, c.sent, c.delivered, c.dropped_total(), network.in_flight(fc.id)});
    }
    for (auto& flow : flows) {
      result.summaries.push_back(summarize(flow->log, scenario.window_start, scenario.window_end));
      result.streams.push_back({flow->config.id, flow->verifier.bytes(), flow->verifier.mismatches(),
                                flow->sender->stats().bytes_acked});
      result.sender_stats.push_back(flow->sender->stats());
      if (flow->sender->failed()) {
        result.failed = true;
        result.failure = "flow " + std::to_string(flow->config.id) +
                         " exceeded the retransmission back-off limit";
      }
      result.intervals.push_back(std::move(flow->log));
    }
    if (options.topology) result.topology = network.topology_log();
    if (options.packet_log) result.packet_log = network.packet_log();
    result.link_breaks = network.link_breaks();
    if (options.dispatch_log) result.dispatch_log = simulator.dispatch_log();
  } catch (const std::exception& e) {
    result.failed = true;
    result.failure = e.what();
  }
  return result;
}

std::vector<RunResult> run_experiment(const Scenario& scenario, std::size_t iterations,
                                      std::uint64_t base_seed, const RunOptions& options,
                                      unsigned jobs) {
  if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  std::vector<RunResult> results(iterations);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(iterations)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < iterations; i = next++) {
      results[i] = run_once(scenario, base_seed + i, options);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

}  // namespace manet::harness
