#include <doctest.h>

#include "manet/harness/run.hpp"

using namespace manet;
using namespace manet::harness;

namespace {
Scenario chain(double loss, transport::PolicyKind policy, double duration = 60) {
  Scenario s = parse_scenario(R"(
[network]
nodes = 4
[mobility]
max_speed = 0
positions = 0:0 200:0 400:0 600:0
[flow.0]
kind = ftp
src = 0
dst = 3
)");
  s.network.segment_loss = loss;
  s.flows[0].policy = policy;
  s.duration = duration;
  s.window_start = duration / 2;
  s.window_end = duration;
  return s;
}
}  // namespace

TEST_CASE("same seed reproduces the run") {
  Scenario s = default_scenario();
  s.duration = 30;
  s.window_start = 10;
  s.window_end = 30;
  RunOptions opt;
  opt.dispatch_log = true;
  opt.trace = true;
  auto a = run_once(s, 5, opt);
  auto b = run_once(s, 5, opt);
  REQUIRE_FALSE(a.failed);
  CHECK(a.events == b.events);
  CHECK(a.dispatch_log == b.dispatch_log);
  REQUIRE(a.intervals.size() == 1);
  CHECK(a.intervals[0].samples.size() == b.intervals[0].samples.size());
  for (std::size_t i = 0; i < a.intervals[0].samples.size(); ++i) {
    CHECK(a.intervals[0].samples[i].idd == b.intervals[0].samples[i].idd);
  }
  CHECK(a.trace.size() == b.trace.size());
  auto c = run_once(s, 6, opt);
  CHECK(c.dispatch_log != a.dispatch_log);
}

TEST_CASE("byte stream survives segment loss") {
  for (double loss : {0.0, 0.05, 0.2}) {
    for (auto p : {transport::PolicyKind::Tcp, transport::PolicyKind::Adtcp,
                   transport::PolicyKind::Madtcp}) {
      CAPTURE(loss);
      auto r = run_once(chain(loss, p), 1);
      REQUIRE_FALSE(r.failed);
      REQUIRE(r.streams.size() == 1);
      CHECK(r.streams[0].mismatches == 0);
      CHECK(r.streams[0].bytes_released > 20000);
      CHECK(r.streams[0].bytes_released >= r.streams[0].bytes_acked);
      for (const auto& a : r.audits) CHECK(a.holds());
    }
  }
}

TEST_CASE("clean static chain has no breaks and a steady state") {
  auto s = chain(0.0, transport::PolicyKind::Madtcp);
  s.network.mac.base_collision = 0.0;
  auto r = run_once(s, 3);
  REQUIRE_FALSE(r.failed);
  CHECK(r.link_breaks.empty());
  CHECK(r.sender_stats[0].timeouts == 0);
  CHECK(r.sender_stats[0].retransmissions == 0);
}

TEST_CASE("experiment seeds and ordering") {
  Scenario s = default_scenario();
  s.duration = 12;
  s.window_start = 6;
  s.window_end = 12;
  auto one = run_experiment(s, 1, 40);
  REQUIRE(one.size() == 1);
  CHECK(one[0].seed == 40);
  auto many = run_experiment(s, 3, 40, {}, 2);
  REQUIRE(many.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(many[i].seed == 40 + i);
  CHECK(many[0].events == one[0].events);
  CHECK_THROWS_AS(run_experiment(s, 0, 1), std::invalid_argument);
}

TEST_CASE("policy override reaches every transport flow") {
  Scenario s = default_scenario();
  s.duration = 10;
  s.window_start = 5;
  s.window_end = 10;
  RunOptions opt;
  opt.policy_override = transport::PolicyKind::Adtcp;
  auto r = run_once(s, 1, opt);
  CHECK(r.label == "adtcp");
  for (const auto& f : r.intervals) CHECK(f.policy == transport::PolicyKind::Adtcp);
}

TEST_CASE("summaries cover the window only") {
  FlowIntervals f;
  metrics::MetricSample a, b;
  a.start = 1;
  a.stt = 4;
  a.iad = 0.5;
  a.iad_count = 2;
  b.start = 2;
  b.stt = 8;
  b.iad = 0.2;
  b.iad_count = 3;
  f.samples = {a, b};
  auto s = summarize(f, 1, 3);
  CHECK(s.intervals == 2);
  CHECK(s.stt == 6);
  CHECK(*s.iad == doctest::Approx((1.0 + 0.6) / 5));
  CHECK_FALSE(summarize(f, 5, 6).iad);
}

TEST_CASE("M-ADTCP with a pinned limit under forced NORMAL traces like ADTCP") {
  Scenario s = default_scenario();
  s.duration = 40;
  s.window_start = 20;
  s.window_end = 40;
  s.metrics.forced_state = metrics::NetworkState::Normal;
  s.policy.cwl_min = s.policy.cwl_max = s.policy.cwl_fixed;
  RunOptions opt;
  opt.trace = true;
  for (std::uint64_t seed : {1u, 2u, 5u}) {
    opt.policy_override = transport::PolicyKind::Adtcp;
    auto a = run_once(s, seed, opt);
    opt.policy_override = transport::PolicyKind::Madtcp;
    auto m = run_once(s, seed, opt);
    REQUIRE(a.trace.size() == m.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
      REQUIRE(a.trace[i].record.time == m.trace[i].record.time);
      REQUIRE(a.trace[i].record.cwnd == m.trace[i].record.cwnd);
      REQUIRE(a.trace[i].record.cwl == m.trace[i].record.cwl);
    }
  }
}
