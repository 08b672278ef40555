#include <doctest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "manet/sim/rng.hpp"
#include "manet/sim/simulator.hpp"

using manet::sim::RngStream;
using manet::sim::Simulator;

TEST_CASE("event at the current clock is dispatched") {
  Simulator sim;
  int fired = 0;
  sim.schedule(0.0, [&] { ++fired; });
  CHECK(sim.run_until(0.0) == 1);
  CHECK(fired == 1);
}

TEST_CASE("equal fire times dispatch in scheduling order") {
  Simulator sim;
  std::vector<int> order;
  sim.schedule(1.0, [&] { order.push_back(1); });
  sim.schedule(1.0, [&] { order.push_back(2); });
  sim.schedule(0.5, [&] { order.push_back(0); });
  sim.run_until(2.0);
  CHECK(order == std::vector<int>{0, 1, 2});
}

TEST_CASE("scheduling in the past is rejected") {
  Simulator sim;
  sim.run_until(1.0);
  CHECK_THROWS_AS(sim.schedule(0.5, [] {}), std::invalid_argument);
  CHECK_THROWS_AS(sim.run_until(0.5), std::invalid_argument);
}

TEST_CASE("empty queue advances the clock") {
  Simulator sim;
  CHECK(sim.run_until(150.0) == 0);
  CHECK(sim.now() == 150.0);
}

TEST_CASE("run_until boundary is inclusive") {
  Simulator sim;
  for (double t : {1.0, 2.0, 3.0}) sim.schedule(t, [] {});
  CHECK(sim.run_until(2.0) == 2);
  CHECK(sim.pending() == 1);
  CHECK(sim.run_until(3.0) == 1);
}

TEST_CASE("cancelled events are skipped") {
  Simulator sim;
  int fired = 0;
  auto h = sim.schedule(1.0, [&] { ++fired; });
  sim.schedule(1.0, [&] { ++fired; });
  h.cancel();
  CHECK(h.cancelled());
  CHECK(sim.run_until(5.0) == 1);
  CHECK(fired == 1);
}

TEST_CASE("clock never goes backwards and nothing is lost") {
  Simulator sim;
  RngStream rng(7);
  double last = 0.0;
  bool monotone = true;
  std::size_t dispatched = 0;
  std::function<void()> spawn = [&] {
    if (sim.now() < last) monotone = false;
    last = sim.now();
    ++dispatched;
    if (rng.bernoulli(0.6)) sim.schedule_in(rng.uniform(0.0, 1.0), spawn);
    if (rng.bernoulli(0.3)) sim.schedule_in(0.0, spawn);
  };
  for (int i = 0; i < 50; ++i) sim.schedule(rng.uniform(0.0, 5.0), spawn);
  std::size_t counted = sim.run_until(1e9);
  CHECK(monotone);
  CHECK(counted == dispatched);
  CHECK(sim.pending() == 0);
}

namespace {
std::vector<manet::sim::DispatchRecord> scripted_log(std::uint64_t seed) {
  Simulator sim;
  sim.enable_dispatch_log(true);
  RngStream rng = RngStream::derive(seed, "mac");
  std::function<void()> tick = [&] {
    if (sim.now() < 20.0) sim.schedule_in(rng.uniform(0.0, 0.3), tick, "tick");
  };
  sim.schedule(0.0, tick, "tick");
  sim.schedule(0.0, tick, "tock");
  sim.run_until(30.0);
  return sim.dispatch_log();
}
}  // namespace

TEST_CASE("same seed gives the same dispatch log") {
  auto a = scripted_log(3);
  auto b = scripted_log(3);
  REQUIRE(a.size() > 10);
  CHECK(a == b);
  CHECK(a != scripted_log(4));
}

TEST_CASE("rng streams are reproducible and label-separated") {
  RngStream a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  auto m = RngStream::derive(1, "mobility");
  auto c = RngStream::derive(1, "mac");
  CHECK(m.seed() != c.seed());
  CHECK(RngStream::derive(1, "mobility").seed() == m.seed());
  RngStream u(9);
  for (int i = 0; i < 1000; ++i) {
    double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("mt19937_64 reference value") {
  // 10000th output of the default-seeded engine, fixed by the C++ standard.
  RngStream r(5489);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = r.next_u64();
  CHECK(v == 9981545732273789042ULL);
}
