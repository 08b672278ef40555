#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "manet/harness/run.hpp"

namespace manet::harness {

enum class Metric : std::uint8_t { InterArrivalDelay, Idd, Por, Stt };
inline constexpr std::array<Metric, 4> kMetrics = {Metric::InterArrivalDelay, Metric::Idd,
                                                   Metric::Por, Metric::Stt};
const char* to_string(Metric metric);
/// Direction in which M-ADTCP is expected to improve on ADTCP.
bool lower_is_better(Metric metric);

struct MetricStats {
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation
  std::size_t n = 0;
};

/// Population mean and standard deviation.
MetricStats describe(const std::vector<double>& values);

/// One-sided sign test: P(X >= wins) for X ~ Binomial(wins + losses, 1/2).
double sign_test_p(std::size_t wins, std::size_t losses);

struct PolicyRow {
  transport::PolicyKind policy = transport::PolicyKind::Tcp;
  std::array<MetricStats, 4> stats{};  // indexed by Metric
};

struct PairedTest {
  Metric metric = Metric::Stt;
  std::size_t pairs = 0;
  std::size_t wins = 0;    // seeds where M-ADTCP moved in the expected direction
  std::size_t losses = 0;
  std::size_t ties = 0;
  double mean_difference = 0.0;  // M-ADTCP minus ADTCP
  double p_value = 1.0;
};

struct FailedRun {
  std::uint64_t seed;
  std::string reason;
};

struct ComparisonReport {
  double window_start = 0.0;
  double window_end = 0.0;
  std::vector<PolicyRow> rows;       // ordered tcp, adtcp, madtcp (present ones)
  std::vector<PairedTest> paired;    // empty unless both adtcp and madtcp ran
  std::vector<FailedRun> failed;
};

/// Per-policy statistics over runs of the per-run window means. Each run
/// contributes, for every policy it used, the average of that policy's flow
/// summaries. Failed runs are listed and excluded. Throws
/// std::invalid_argument if no interval falls in the window.
ComparisonReport aggregate(const std::vector<RunResult>& results, double window_start,
                           double window_end);

enum class Format { Csv, Text };

/// csv: summary.csv (`policy,metric,mean,sd,n`); text: report.txt. Throws on
/// an empty report or an unwritable directory; nothing is written then.
void emit(const ComparisonReport& report, Format format, const std::filesystem::path& dir);

/// intervals.csv: one row per flow interval of every successful run.
void write_intervals(const std::vector<RunResult>& results, const std::filesystem::path& dir);
void write_trace(const std::vector<RunResult>& results, const std::filesystem::path& dir);
void write_topology(const std::vector<RunResult>& results, const std::filesystem::path& dir);

std::string format_csv(const ComparisonReport& report);
std::string format_text(const ComparisonReport& report);

}  // namespace manet::harness
