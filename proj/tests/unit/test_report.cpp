#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "manet/harness/report.hpp"

using namespace manet;
using namespace manet::harness;
using transport::PolicyKind;

namespace {
metrics::MetricSample sample(double start, double stt, double idd = 0.01, double por = 0.1,
                             double iad = 0.05) {
  metrics::MetricSample s;
  s.start = start;
  s.end = start + 0.9;
  s.n_p = 9;
  s.stt = stt;
  s.idd = idd;
  s.por = por;
  s.iad = iad;
  s.iad_count = 9;
  return s;
}

RunResult run(std::uint64_t seed, PolicyKind policy, std::vector<metrics::MetricSample> samples) {
  RunResult r;
  r.seed = seed;
  FlowIntervals f;
  f.flow = 2;
  f.policy = policy;
  f.samples = std::move(samples);
  f.states.assign(f.samples.size(), metrics::NetworkState::Normal);
  r.intervals.push_back(f);
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("single interval aggregates to itself") {
  auto r = run(1, PolicyKind::Madtcp, {sample(100.8, 12.5, 0.003, 0.2, 0.07)});
  auto report = aggregate({r}, 100, 150);
  REQUIRE(report.rows.size() == 1);
  const auto& st = report.rows[0].stats;
  CHECK(st[size_t(Metric::Stt)].mean == 12.5);
  CHECK(st[size_t(Metric::Idd)].mean == 0.003);
  CHECK(st[size_t(Metric::Por)].mean == 0.2);
  CHECK(st[size_t(Metric::InterArrivalDelay)].mean == 0.07);
  CHECK(st[size_t(Metric::Stt)].sd == 0.0);
}

TEST_CASE("population statistics") {
  auto report = aggregate({run(1, PolicyKind::Adtcp, {sample(100, 10)}),
                           run(2, PolicyKind::Adtcp, {sample(100, 20)})},
                          100, 150);
  const auto& s = report.rows[0].stats[size_t(Metric::Stt)];
  CHECK(s.mean == 15.0);
  CHECK(s.sd == 5.0);
  CHECK(s.n == 2);
}

TEST_CASE("samples outside the window are ignored") {
  auto r = run(1, PolicyKind::Tcp, {sample(99.9, 1000), sample(100.0, 10), sample(149.9, 20),
                                    sample(150.0, 1000)});
  auto report = aggregate({r}, 100, 150);
  CHECK(report.rows[0].stats[size_t(Metric::Stt)].mean == 15.0);
  CHECK_THROWS_AS(aggregate({run(1, PolicyKind::Tcp, {sample(10, 1)})}, 100, 150),
                  std::invalid_argument);
  CHECK_THROWS_AS(aggregate({r}, 150, 100), std::invalid_argument);
}

TEST_CASE("failed runs are excluded and listed") {
  auto bad = run(2, PolicyKind::Tcp, {sample(100, 1000)});
  bad.failed = true;
  bad.failure = "boom";
  auto report = aggregate({run(1, PolicyKind::Tcp, {sample(100, 10)}), bad}, 100, 150);
  CHECK(report.rows[0].stats[size_t(Metric::Stt)].mean == 10.0);
  REQUIRE(report.failed.size() == 1);
  CHECK(report.failed[0].seed == 2);
}

TEST_CASE("sign test tail probabilities") {
  CHECK(sign_test_p(0, 0) == 1.0);
  CHECK(sign_test_p(0, 5) == doctest::Approx(1.0));
  CHECK(sign_test_p(5, 0) == doctest::Approx(1.0 / 32));
  CHECK(sign_test_p(3, 2) == doctest::Approx(0.5));
  // direct binomial sum for n = 30, k >= 20
  double p = 0, c = 1;
  for (int k = 0; k <= 30; ++k) {
    if (k >= 20) p += c;
    c = c * (30 - k) / (k + 1);
  }
  CHECK(sign_test_p(20, 10) == doctest::Approx(p / std::pow(2.0, 30)).epsilon(1e-9));
}

TEST_CASE("paired comparison counts direction per metric") {
  std::vector<RunResult> results;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    results.push_back(run(seed, PolicyKind::Adtcp, {sample(100, 10, 0.02, 0.2, 0.1)}));
    double stt = seed == 6 ? 10 : 12;
    results.push_back(run(seed, PolicyKind::Madtcp, {sample(100, stt, 0.01, 0.3, 0.1)}));
  }
  auto report = aggregate(results, 100, 150);
  REQUIRE(report.paired.size() == 4);
  for (const auto& t : report.paired) {
    CHECK(t.pairs == 6);
    if (t.metric == Metric::Stt) {
      CHECK(t.wins == 5);
      CHECK(t.ties == 1);
      CHECK(t.mean_difference == doctest::Approx(10.0 / 6));
    } else if (t.metric == Metric::Idd) {
      CHECK(t.wins == 6);
      CHECK(t.p_value == doctest::Approx(1.0 / 64));
    } else if (t.metric == Metric::Por) {
      CHECK(t.losses == 6);
    } else {
      CHECK(t.ties == 6);
      CHECK(t.p_value == 1.0);
    }
  }
}

TEST_CASE("csv and text output") {
  auto dir = std::filesystem::temp_directory_path() / "manet_report_test";
  std::filesystem::remove_all(dir);
  auto results = std::vector<RunResult>{run(1, PolicyKind::Madtcp, {sample(100, 10)})};
  auto report = aggregate(results, 100, 150);
  emit(report, Format::Csv, dir);
  emit(report, Format::Text, dir);
  write_intervals(results, dir);
  auto csv = slurp(dir / "summary.csv");
  CHECK(csv.rfind("policy,metric,mean,sd,n\n", 0) == 0);
  CHECK(csv.find("madtcp,stt,10,0,1\n") != std::string::npos);
  CHECK(csv.find("madtcp,inter_arrival_delay,0.05,0,1\n") != std::string::npos);
  CHECK(slurp(dir / "report.txt").find("Short-term throughput") != std::string::npos);
  auto iv = slurp(dir / "intervals.csv");
  CHECK(iv.rfind("policy,seed,flow,T,idd,stt,por,plr,iad,n_p,state\n", 0) == 0);
  CHECK(iv.find("madtcp,1,2,100,0.01,10,0.1,0,0.05,9,NORMAL\n") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("empty report writes nothing") {
  auto dir = std::filesystem::temp_directory_path() / "manet_report_empty";
  std::filesystem::remove_all(dir);
  ComparisonReport empty;
  CHECK_THROWS_AS(emit(empty, Format::Csv, dir), std::invalid_argument);
  CHECK_FALSE(std::filesystem::exists(dir / "summary.csv"));
}
