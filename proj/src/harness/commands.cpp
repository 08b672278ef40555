#include "manet/harness/commands.hpp"

#include <ostream>

#include "manet/harness/scenario.hpp"

namespace manet::harness {

namespace {

void write_outputs(const std::vector<RunResult>& results, const Scenario& scenario, bool trace,
                   bool topology, const std::filesystem::path& out, std::ostream& log,
                   ComparisonReport& report) {
  report = aggregate(results, scenario.window_start, scenario.window_end);
  for (const auto& f : report.failed) {
    log << "warning: run with seed " << f.seed << " failed and was excluded: " << f.reason << "\n";
  }
  emit(report, Format::Csv, out);
  emit(report, Format::Text, out);
  write_intervals(results, out);
  if (trace) write_trace(results, out);
  if (topology) write_topology(results, out);
}

}  // namespace

ComparisonReport run_simulate(const SimulateOptions& options, std::ostream& log) {
  Scenario scenario = load_scenario(options.scenario);
  std::size_t iterations = options.iterations.value_or(scenario.iterations);
  std::uint64_t seed = options.seed.value_or(scenario.seed);
  RunOptions run_options;
  run_options.trace = options.trace;
  run_options.topology = options.topology_log;
  auto results = run_experiment(scenario, iterations, seed, run_options, options.jobs);
  ComparisonReport report;
  write_outputs(results, scenario, options.trace, options.topology_log, options.out, log, report);
  return report;
}

ComparisonReport run_compare(const CompareOptions& options, std::ostream& log) {
  if (options.policies.empty()) throw std::invalid_argument("no policies to compare");
  Scenario scenario = load_scenario(options.scenario);
  std::size_t iterations = options.iterations.value_or(scenario.iterations);
  std::uint64_t seed = options.seed.value_or(scenario.seed);
  std::vector<RunResult> all;
  for (auto policy : options.policies) {
    RunOptions run_options;
    run_options.trace = options.trace;
    run_options.topology = options.topology_log;
    run_options.policy_override = policy;
    auto results = run_experiment(scenario, iterations, seed, run_options, options.jobs);
    for (auto& r : results) all.push_back(std::move(r));
  }
  ComparisonReport report;
  write_outputs(all, scenario, options.trace, options.topology_log, options.out, log, report);
  return report;
}

}  // namespace manet::harness
