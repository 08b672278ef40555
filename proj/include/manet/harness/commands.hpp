#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "manet/harness/report.hpp"
#include "manet/harness/run.hpp"

namespace manet::harness {

struct SimulateOptions {
  std::filesystem::path scenario;
  std::optional<std::size_t> iterations;  // default: scenario value
  std::optional<std::uint64_t> seed;      // default: scenario value
  std::filesystem::path out = "results";
  bool trace = false;
  bool topology_log = false;
  unsigned jobs = 1;
};

struct CompareOptions {
  std::filesystem::path scenario;
  std::vector<transport::PolicyKind> policies = {transport::PolicyKind::Adtcp,
                                                 transport::PolicyKind::Madtcp};
  std::optional<std::size_t> iterations;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "results";
  bool trace = false;
  bool topology_log = false;
  unsigned jobs = 1;
};

/// Runs the scenario as configured and writes summary.csv, intervals.csv and
/// report.txt (plus trace.csv / topology.csv on request) into `out`.
/// Warnings about excluded runs go to `log`. Returns the report.
ComparisonReport run_simulate(const SimulateOptions& options, std::ostream& log);

/// Runs the scenario once per policy with identical seeds, every FTP flow
/// switched to that policy, and writes the same outputs.
ComparisonReport run_compare(const CompareOptions& options, std::ostream& log);

}  // namespace manet::harness
