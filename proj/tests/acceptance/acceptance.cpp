// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "manet/harness/report.hpp"
#include "manet/harness/run.hpp"
#include "manet/harness/scenario.hpp"
#include "manet/metrics/classifier.hpp"
#include "manet/metrics/interval_metrics.hpp"
#include "manet/metrics/records.hpp"
#include "manet/policy/policies.hpp"
#include "manet/sim/rng.hpp"
#include "manet/transport/sender.hpp"
#include "support/metric_oracle.hpp"

#ifndef MANETSIM_PATH
#define MANETSIM_PATH "manetsim"
#endif

namespace {

using namespace manet;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and sizes.
constexpr double kOracleTolerance = 1e-9;
constexpr double kOracleBudget = 10.0;     // s
constexpr double kIddTolerance = 1e-12;
constexpr int kOracleTraces = 1000;
constexpr std::size_t kOraclePackets = 1000;
constexpr int kPolicySequences = 10000;
constexpr std::size_t kReproductionRuns = 167;
constexpr double kSignificance = 0.05;
constexpr double kReproductionBudget = 300.0;  // s
constexpr double kSingleRunBudget = 10.0;      // s
constexpr std::uint64_t kBaseSeed = 1;

int failures = 0;

void report(int id, bool pass, const std::string& name, const std::string& detail) {
  std::printf("%s %d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1 -------------------------------------------------------------------------

void metric_oracle_equivalence() {
  auto t0 = Clock::now();
  sim::RngStream rng = sim::RngStream::derive(kBaseSeed, "oracle");
  double worst = 0.0;
  std::size_t intervals = 0, count_mismatch = 0;
  for (int trial = 0; trial < kOracleTraces; ++trial) {
    auto trace = oracle::random_trace(rng, kOraclePackets);
    auto divisor = trial % 2 ? metrics::IddDivisor::ValidPairs : metrics::IddDivisor::Literal;
    metrics::MetricsConfig cfg;
    cfg.delta = 0.9;
    cfg.divisor = divisor;
    metrics::IntervalMetrics engine(cfg);
    std::vector<metrics::MetricSample> got;
    for (const auto& a : trace) {
      while (a.arrived >= engine.next_boundary()) {
        got.push_back(engine.close_interval(engine.next_boundary()).sample);
      }
      engine.record_packet(a.seq, a.sent, a.arrived, a.size);
    }
    got.push_back(engine.close_interval(engine.next_boundary()).sample);

    auto want = oracle::batch_metrics(trace, cfg.delta, 0.0, got.size(), divisor);
    for (std::size_t k = 0; k < got.size(); ++k) {
      if (got[k].n_p != want[k].n_p) ++count_mismatch;
      worst = std::max({worst, std::abs(got[k].idd - want[k].idd), std::abs(got[k].stt - want[k].stt),
                        std::abs(got[k].por - want[k].por), std::abs(got[k].plr - want[k].plr)});
      ++intervals;
    }
  }
  double elapsed = seconds_since(t0);
  bool pass = worst <= kOracleTolerance && count_mismatch == 0 && elapsed < kOracleBudget;
  report(1, pass, "metric oracle equivalence",
         std::to_string(kOracleTraces) + " traces, " + std::to_string(intervals) +
             " intervals, max |diff| " + fmt("%.3g", worst) + ", " + fmt("%.2f", elapsed) + " s");
}

// 2 -------------------------------------------------------------------------

void idd_fidelity() {
  auto table = [](std::vector<double> s, std::vector<double> a) {
    metrics::RecordTable t;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!std::isnan(a[i])) t.put({i + 1, s[i], a[i], 1000});
    }
    return t;
  };
  struct Case {
    metrics::RecordTable records;
    metrics::Seq st, ed;
    double expected;
    double pair_sum;
    double valid_pairs;
  };
  std::vector<Case> cases;
  cases.push_back({table({0.0, 1.0}, {0.5, 1.5}), 1, 2, 0.0, 0.0, 1});
  cases.push_back({table({0.0, 1.0, 2.0}, {0.1, 1.6, 2.7}), 1, 3, 0.2, 0.6, 2});
  cases.push_back({table({0.0, 1.0, 2.0}, {0.1, NAN, 2.3}), 1, 3, 0.0, 0.0, 0});

  bool pass = true;
  std::string detail;
  for (auto& c : cases) {
    double literal = metrics::compute_idd(c.records, c.st, c.ed, metrics::IddDivisor::Literal);
    double valid = metrics::compute_idd(c.records, c.st, c.ed, metrics::IddDivisor::ValidPairs);
    double n = static_cast<double>(c.ed - c.st + 1);
    bool ok = std::abs(literal - c.expected) <= kIddTolerance;
    // Same numerator, different divisor.
    if (c.valid_pairs > 0) {
      ok = ok && std::abs(valid * c.valid_pairs - literal * n) <= kIddTolerance &&
           std::abs(valid - c.pair_sum / c.valid_pairs) <= kIddTolerance;
    } else {
      ok = ok && valid == 0.0;
    }
    pass = pass && ok;
    detail += fmt("%.12g", literal) + (ok ? " " : "(x) ");
  }
  report(2, pass, "ComputeIDD fidelity", "literal values " + detail + "expected 0 0.2 0");
}

// 3 -------------------------------------------------------------------------

void classification_rules() {
  const double h = 0.3;
  const double levels[] = {0.0, 0.5, 0.69, 0.71, 1.0, 1.29, 1.31, 2.0};
  const double medians[] = {0.01, 1.0, 25.0};
  std::size_t points = 0, wrong = 0;
  for (double m : medians) {
    metrics::MetricHistory history;
    for (int i = 0; i < 20; ++i) {
      metrics::MetricSample s;
      s.n_p = 5;
      s.idd = s.stt = s.por = s.plr = m;
      history.push(s);
    }
    for (std::uint64_t n_p : {0u, 1u, 9u}) {
      for (double a : levels) {
        for (double b : levels) {
          for (double c : levels) {
            for (double d : levels) {
              metrics::MetricSample s;
              s.n_p = n_p;
              s.idd = a * m;
              s.stt = b * m;
              s.por = c * m;
              s.plr = d * m;
              // Independent table: thresholds on the ratio to the median.
              auto high = [&](double ratio) { return ratio * m > (1 + h) * m; };
              auto low = [&](double ratio) { return ratio * m < (1 - h) * m; };
              metrics::NetworkState want = metrics::NetworkState::Normal;
              if (n_p == 0) want = metrics::NetworkState::Disconnected;
              else if (high(a) && low(b)) want = metrics::NetworkState::Congested;
              else if (high(c)) want = metrics::NetworkState::RouteChange;
              else if (high(d)) want = metrics::NetworkState::ChannelError;
              auto got = metrics::classify_state(s, history, h);
              if (got != want || metrics::classify_state(s, history, h) != got) ++wrong;
              ++points;
            }
          }
        }
      }
    }
  }
  report(3, wrong == 0, "classification rules",
         std::to_string(points) + " grid points, " + std::to_string(wrong) + " mismatches");
}

// 4 -------------------------------------------------------------------------

void policy_invariants() {
  const metrics::NetworkState states[] = {
      metrics::NetworkState::Normal, metrics::NetworkState::Congested,
      metrics::NetworkState::RouteChange, metrics::NetworkState::ChannelError,
      metrics::NetworkState::Disconnected};
  sim::RngStream rng = sim::RngStream::derive(kBaseSeed, "policy");
  policy::PolicyConfig base;
  std::size_t violations = 0, events = 0, channel_errors = 0;

  for (int n = 0; n < kPolicySequences; ++n) {
    for (auto kind : {policy::PolicyKind::Adtcp, policy::PolicyKind::Madtcp}) {
      sim::Simulator simulator;
      policy::PolicyConfig pc = base;
      pc.kind = kind;
      transport::TransportSender sender(simulator, 1, {}, policy::make_policy(pc),
                                        [](transport::Segment) {});
      sender.send_data(std::vector<std::uint8_t>(200 * 1000, 1));
      std::size_t len = 1 + rng.below(40);
      double now = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        now += rng.uniform(0.0, 0.9);
        simulator.run_until(now);
        transport::Segment ack;
        ack.flow = 1;
        ack.kind = transport::Segment::Kind::Ack;
        const auto& st = sender.state();
        // Random cumulative progress, sometimes a duplicate.
        ack.cum_ack = st.snd_una + (st.inflight() ? rng.below(st.inflight() + 1) : 0);
        sender.on_ack(ack);

        transport::Feedback fb;
        fb.interval_id = static_cast<std::int64_t>(i);
        fb.state = states[rng.below(5)];
        transport::Segment carrier;
        carrier.flow = 1;
        carrier.kind = transport::Segment::Kind::Ack;
        carrier.cum_ack = sender.state().snd_una;
        carrier.feedback_only = true;
        carrier.feedback = fb;
        auto before = sender.state();
        sender.on_ack(carrier);
        const auto& after = sender.state();
        ++events;
        if (kind == policy::PolicyKind::Madtcp && (after.cwl < base.cwl_min || after.cwl > base.cwl_max)) {
          ++violations;
        }
        if (kind == policy::PolicyKind::Adtcp && after.cwl != base.cwl_fixed) ++violations;
        if (fb.state == metrics::NetworkState::ChannelError) {
          ++channel_errors;
          if (after.cwnd < before.cwnd || after.ssthresh < before.ssthresh || after.cwl < before.cwl) {
            ++violations;
          }
        }
        if (after.cwnd < 1.0 || after.cwnd > after.cwl) ++violations;
      }
    }
  }
  report(4, violations == 0, "policy invariants",
         std::to_string(kPolicySequences) + " sequences per policy, " + std::to_string(events) +
             " feedback events (" + std::to_string(channel_errors) + " channel errors), " +
             std::to_string(violations) + " violations");
}

// 5 -------------------------------------------------------------------------

void transport_fidelity() {
  bool pass = true;
  std::string detail;
  for (double loss : {0.0, 0.05, 0.20}) {
    for (auto kind : {policy::PolicyKind::Tcp, policy::PolicyKind::Adtcp, policy::PolicyKind::Madtcp}) {
      harness::Scenario s = harness::parse_scenario(
          "[network]\nnodes = 4\n[mobility]\nmax_speed = 0\npositions = 0:0 200:0 400:0 600:0\n"
          "[flow.0]\nkind = ftp\nsrc = 0\ndst = 3\n");
      s.network.segment_loss = loss;
      s.flows[0].policy = kind;
      auto r = harness::run_once(s, kBaseSeed);
      bool ok = !r.failed && r.streams.size() == 1 && r.streams[0].mismatches == 0 &&
                r.streams[0].bytes_released > 0 && r.streams[0].bytes_released >= r.streams[0].bytes_acked;
      pass = pass && ok;
      detail += std::string(transport::to_string(kind)) + "@" + fmt("%g", loss * 100) + "%=" +
                (r.streams.empty() ? std::string("?") : std::to_string(r.streams[0].bytes_released)) +
                (ok ? "B " : "B(x) ");
    }
  }
  report(5, pass, "transport fidelity", "released bytes match the sent prefix: " + detail);
}

// 6 and 8 -------------------------------------------------------------------

struct Deferred {
  bool pass = false;
  std::string detail;
};

Deferred reproduction_and_conservation() {
  harness::Scenario s = harness::default_scenario();
  auto t0 = Clock::now();
  std::vector<harness::RunResult> results;
  std::size_t audits = 0, broken = 0;
  for (std::size_t i = 0; i < kReproductionRuns; ++i) {
    for (auto kind : {policy::PolicyKind::Adtcp, policy::PolicyKind::Madtcp}) {
      harness::RunOptions opt;
      opt.policy_override = kind;
      opt.packet_log = true;
      auto r = harness::run_once(s, kBaseSeed + i, opt);
      // Conservation from the packet event log of every flow.
      std::map<net::FlowId, std::int64_t> balance;
      for (const auto& e : r.packet_log) {
        balance[e.flow] += e.kind == net::PacketEventKind::Sent ? 1 : -1;
      }
      for (const auto& a : r.audits) {
        ++audits;
        std::int64_t open = balance.count(a.flow) ? balance[a.flow] : 0;
        if (!a.holds() || open != static_cast<std::int64_t>(a.in_flight)) ++broken;
      }
      r.packet_log.clear();
      r.packet_log.shrink_to_fit();
      results.push_back(std::move(r));
    }
  }
  double elapsed = seconds_since(t0);

  auto rep = harness::aggregate(results, s.window_start, s.window_end);
  bool pass = elapsed < kReproductionBudget && rep.paired.size() == 4 && rep.failed.empty();
  std::string detail = std::to_string(kReproductionRuns) + " seeds, " + fmt("%.1f", elapsed) + " s;";
  for (const auto& t : rep.paired) {
    bool direction = harness::lower_is_better(t.metric) ? t.mean_difference < 0 : t.mean_difference > 0;
    bool ok = direction && t.p_value < kSignificance;
    pass = pass && ok;
    detail += std::string(" ") + harness::to_string(t.metric) + " " + std::to_string(t.wins) + "/" +
              std::to_string(t.losses) + "/" + std::to_string(t.ties) + " diff " +
              fmt("%.4g", t.mean_difference) + " p=" + fmt("%.3g", t.p_value) + (ok ? "" : "(x)") + ";";
  }
  if (!rep.failed.empty()) detail += " " + std::to_string(rep.failed.size()) + " failed runs;";
  report(6, pass, "directional reproduction (madtcp vs adtcp, wins/losses/ties)", detail);
  return {broken == 0 && audits > 0,
          std::to_string(audits) + " flow audits from the event log, " + std::to_string(broken) +
              " violations"};
}

// 7 -------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism() {
  auto root = std::filesystem::temp_directory_path() /
              ("manet_acceptance_" + std::to_string(static_cast<long>(::getpid())));
  std::filesystem::remove_all(root);
  std::filesystem::create_directories(root);
  auto scenario = root / "scenario.ini";
  std::ofstream(scenario) << "[experiment]\niterations = 6\nseed = 11\n";

  bool pass = true;
  std::string detail;
  for (const char* run : {"a", "b"}) {
    std::string cmd = std::string("\"") + MANETSIM_PATH + "\" compare --scenario \"" +
                      scenario.string() + "\" --policies adtcp,madtcp --out \"" +
                      (root / run).string() + "\" > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      pass = false;
      detail += std::string("invocation ") + run + " failed; ";
    }
  }
  for (const char* file : {"summary.csv", "intervals.csv", "report.txt"}) {
    auto a = root / "a" / file, b = root / "b" / file;
    bool same = std::filesystem::exists(a) && std::filesystem::exists(b) && slurp(a) == slurp(b) &&
                !slurp(a).empty();
    pass = pass && same;
    detail += std::string(file) + (same ? " identical (" + std::to_string(slurp(a).size()) + " B) "
                                         : " differs ");
  }
  std::filesystem::remove_all(root);
  report(7, pass, "determinism", detail);
}

// 9 -------------------------------------------------------------------------

void performance() {
  harness::Scenario s = harness::default_scenario();
  auto t0 = Clock::now();
  auto r = harness::run_once(s, kBaseSeed);
  double elapsed = seconds_since(t0);
  report(9, elapsed < kSingleRunBudget && !r.failed, "performance",
         "150 s reference run in " + fmt("%.3f", elapsed) + " s wall, " + std::to_string(r.events) +
             " events");
}

}  // namespace

int main() {
  metric_oracle_equivalence();
  idd_fidelity();
  classification_rules();
  policy_invariants();
  transport_fidelity();
  Deferred conservation = reproduction_and_conservation();
  determinism();
  report(8, conservation.pass, "conservation audit", conservation.detail);
  performance();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
