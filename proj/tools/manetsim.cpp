#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "manet/harness/commands.hpp"

namespace {

std::vector<manet::transport::PolicyKind> parse_policies(const std::string& list) {
  std::vector<manet::transport::PolicyKind> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto p = manet::transport::parse_policy(item);
    if (!p) throw std::invalid_argument("unknown policy '" + item + "' (expected tcp, adtcp, madtcp)");
    out.push_back(*p);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MANET congestion-control simulator (TCP, ADTCP, M-ADTCP)"};
  app.require_subcommand(1);

  manet::harness::SimulateOptions sim;
  std::size_t sim_iterations = 0;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario as configured");
  simulate->add_option("--scenario", sim.scenario, "Scenario file")->required();
  auto* sim_iter_opt = simulate->add_option("--iterations", sim_iterations, "Independent runs");
  auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "Base seed (run i uses seed + i)");
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_flag("--trace", sim.trace, "Write per-flow sender trace (trace.csv)");
  simulate->add_flag("--topology-log", sim.topology_log, "Write node trajectories (topology.csv)");
  simulate->add_option("--jobs", sim.jobs, "Parallel runs")->check(CLI::PositiveNumber);

  manet::harness::CompareOptions cmp;
  std::string policies = "adtcp,madtcp";
  std::size_t cmp_iterations = 0;
  std::uint64_t cmp_seed = 0;
  auto* compare = app.add_subcommand("compare", "Run the scenario under each policy with paired seeds");
  compare->add_option("--scenario", cmp.scenario, "Scenario file")->required();
  compare->add_option("--policies", policies, "Comma-separated policies");
  auto* cmp_iter_opt = compare->add_option("--iterations", cmp_iterations, "Independent runs per policy");
  auto* cmp_seed_opt = compare->add_option("--seed", cmp_seed, "Base seed (run i uses seed + i)");
  compare->add_option("--out", cmp.out, "Output directory")->required();
  compare->add_flag("--trace", cmp.trace, "Write per-flow sender trace (trace.csv)");
  compare->add_flag("--topology-log", cmp.topology_log, "Write node trajectories (topology.csv)");
  compare->add_option("--jobs", cmp.jobs, "Parallel runs")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    manet::harness::ComparisonReport report;
    if (*simulate) {
      if (*sim_iter_opt) sim.iterations = sim_iterations;
      if (*sim_seed_opt) sim.seed = sim_seed;
      if (sim.iterations && *sim.iterations == 0) throw std::invalid_argument("--iterations must be >= 1");
      report = manet::harness::run_simulate(sim, std::cerr);
    } else {
      if (*cmp_iter_opt) cmp.iterations = cmp_iterations;
      if (*cmp_seed_opt) cmp.seed = cmp_seed;
      if (cmp.iterations && *cmp.iterations == 0) throw std::invalid_argument("--iterations must be >= 1");
      cmp.policies = parse_policies(policies);
      report = manet::harness::run_compare(cmp, std::cerr);
    }
    std::cout << manet::harness::format_text(report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
