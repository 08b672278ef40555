#include "manet/harness/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace manet::harness {

namespace {

using transport::PolicyKind;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::optional<double> metric_value(const FlowSummary& s, Metric m) {
  switch (m) {
    case Metric::InterArrivalDelay: return s.iad;
    case Metric::Idd: return s.idd;
    case Metric::Por: return s.por;
    case Metric::Stt: return s.stt;
  }
  return std::nullopt;
}

/// seed -> metric -> value for one policy.
using PerRun = std::map<std::uint64_t, std::array<std::optional<double>, 4>>;

}  // namespace

const char* to_string(Metric metric) {
  switch (metric) {
    case Metric::InterArrivalDelay: return "inter_arrival_delay";
    case Metric::Idd: return "idd";
    case Metric::Por: return "por";
    case Metric::Stt: return "stt";
  }
  return "unknown";
}

bool lower_is_better(Metric metric) { return metric != Metric::Stt; }

MetricStats describe(const std::vector<double>& values) {
  MetricStats s;
  s.n = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(sq / static_cast<double>(s.n));
  return s;
}

double sign_test_p(std::size_t wins, std::size_t losses) {
  const std::size_t n = wins + losses;
  if (n == 0) return 1.0;
  // Sum of binomial(n, k) / 2^n for k >= wins, in log space.
  double p = 0.0;
  for (std::size_t k = wins; k <= n; ++k) {
    double log_term = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                      std::lgamma(static_cast<double>(n - k) + 1) - static_cast<double>(n) * std::log(2.0);
    p += std::exp(log_term);
  }
  return std::min(p, 1.0);
}

ComparisonReport aggregate(const std::vector<RunResult>& results, double window_start,
                           double window_end) {
  if (!(window_start < window_end)) throw std::invalid_argument("empty aggregation window");
  ComparisonReport report;
  report.window_start = window_start;
  report.window_end = window_end;

  std::map<PolicyKind, PerRun> per_policy;
  std::size_t intervals_in_window = 0;
  for (const auto& run : results) {
    if (run.failed) {
      report.failed.push_back({run.seed, run.failure});
      continue;
    }
    std::map<PolicyKind, std::vector<FlowSummary>> by_policy;
    for (const auto& flow : run.intervals) {
      FlowSummary s = summarize(flow, window_start, window_end);
      intervals_in_window += s.intervals;
      by_policy[flow.policy].push_back(s);
    }
    for (const auto& [policy, summaries] : by_policy) {
      std::array<std::optional<double>, 4> values{};
      for (Metric m : kMetrics) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& s : summaries) {
          if (auto v = metric_value(s, m)) {
            sum += *v;
            ++count;
          }
        }
        if (count > 0) values[static_cast<std::size_t>(m)] = sum / static_cast<double>(count);
      }
      per_policy[policy][run.seed] = values;
    }
  }
  if (intervals_in_window == 0) {
    throw std::invalid_argument("no measurement interval falls inside the aggregation window");
  }

  for (const auto& [policy, runs] : per_policy) {
    PolicyRow row;
    row.policy = policy;
    for (Metric m : kMetrics) {
      std::vector<double> values;
      for (const auto& [seed, v] : runs) {
        if (v[static_cast<std::size_t>(m)]) values.push_back(*v[static_cast<std::size_t>(m)]);
      }
      row.stats[static_cast<std::size_t>(m)] = describe(values);
    }
    report.rows.push_back(row);
  }

  auto adtcp = per_policy.find(PolicyKind::Adtcp);
  auto madtcp = per_policy.find(PolicyKind::Madtcp);
  if (adtcp != per_policy.end() && madtcp != per_policy.end()) {
    for (Metric m : kMetrics) {
      PairedTest t;
      t.metric = m;
      const auto idx = static_cast<std::size_t>(m);
      double diff_sum = 0.0;
      for (const auto& [seed, mv] : madtcp->second) {
        auto it = adtcp->second.find(seed);
        if (it == adtcp->second.end() || !mv[idx] || !it->second[idx]) continue;
        double diff = *mv[idx] - *it->second[idx];
        ++t.pairs;
        diff_sum += diff;
        if (diff == 0.0) {
          ++t.ties;
        } else if ((diff < 0) == lower_is_better(m)) {
          ++t.wins;
        } else {
          ++t.losses;
        }
      }
      if (t.pairs > 0) t.mean_difference = diff_sum / static_cast<double>(t.pairs);
      t.p_value = sign_test_p(t.wins, t.losses);
      report.paired.push_back(t);
    }
  }
  return report;
}

std::string format_csv(const ComparisonReport& report) {
  std::string out = "policy,metric,mean,sd,n\n";
  for (const auto& row : report.rows) {
    for (Metric m : kMetrics) {
      const auto& s = row.stats[static_cast<std::size_t>(m)];
      out += std::string(transport::to_string(row.policy)) + "," + to_string(m) + "," + num(s.mean) +
             "," + num(s.sd) + "," + std::to_string(s.n) + "\n";
    }
  }
  return out;
}

std::string format_text(const ComparisonReport& report) {
  static const std::array<const char*, 4> kTitles = {
      "Average inter-arrival delay (s)", "Average inter-packet delay difference (s)",
      "Packet out-of-order ratio", "Short-term throughput (packets/s)"};
  std::ostringstream out;
  out << "Measurement window: [" << num(report.window_start) << ", " << num(report.window_end)
      << ") s\n";
  for (Metric m : kMetrics) {
    const auto idx = static_cast<std::size_t>(m);
    out << "\n" << kTitles[idx] << "\n";
    char line[160];
    std::snprintf(line, sizeof line, "  %-8s %16s %16s %6s\n", "policy", "mean", "sd", "n");
    out << line;
    for (const auto& row : report.rows) {
      const auto& s = row.stats[idx];
      std::snprintf(line, sizeof line, "  %-8s %16s %16s %6zu\n", transport::to_string(row.policy),
                    fixed(s.mean, 9).c_str(), fixed(s.sd, 9).c_str(), s.n);
      out << line;
    }
  }
  if (!report.paired.empty()) {
    out << "\nPaired per-seed comparison, madtcp vs adtcp (one-sided sign test)\n";
    char line[200];
    std::snprintf(line, sizeof line, "  %-20s %6s %5s %6s %5s %16s %10s\n", "metric", "pairs", "wins",
                  "losses", "ties", "mean_diff", "p");
    out << line;
    for (const auto& t : report.paired) {
      std::snprintf(line, sizeof line, "  %-20s %6zu %5zu %6zu %5zu %16s %10s\n", to_string(t.metric),
                    t.pairs, t.wins, t.losses, t.ties, fixed(t.mean_difference, 9).c_str(),
                    fixed(t.p_value, 6).c_str());
      out << line;
    }
  }
  if (!report.failed.empty()) {
    out << "\nExcluded runs\n";
    for (const auto& f : report.failed) out << "  seed " << f.seed << ": " << f.reason << "\n";
  }
  return out.str();
}

void emit(const ComparisonReport& report, Format format, const std::filesystem::path& dir) {
  if (report.rows.empty()) throw std::invalid_argument("nothing to emit: report has no results");
  if (format == Format::Csv) {
    write_file(dir / "summary.csv", format_csv(report));
  } else {
    write_file(dir / "report.txt", format_text(report));
  }
}

void write_intervals(const std::vector<RunResult>& results, const std::filesystem::path& dir) {
  std::string out = "policy,seed,flow,T,idd,stt,por,plr,iad,n_p,state\n";
  for (const auto& run : results) {
    if (run.failed) continue;
    for (const auto& flow : run.intervals) {
      for (std::size_t i = 0; i < flow.samples.size(); ++i) {
        const auto& s = flow.samples[i];
        out += std::string(transport::to_string(flow.policy)) + "," + std::to_string(run.seed) + "," +
               std::to_string(flow.flow) + "," + num(s.start) + "," + num(s.idd) + "," + num(s.stt) +
               "," + num(s.por) + "," + num(s.plr) + "," + num(s.iad) + "," + std::to_string(s.n_p) +
               "," + metrics::to_string(flow.states[i]) + "\n";
      }
    }
  }
  write_file(dir / "intervals.csv", out);
}

void write_trace(const std::vector<RunResult>& results, const std::filesystem::path& dir) {
  std::string out = "run,seed,flow,time,event,seq,cwnd,cwl,rto,state\n";
  for (const auto& run : results) {
    for (const auto& row : run.trace) {
      const auto& r = row.record;
      out += run.label + "," + std::to_string(run.seed) + "," + std::to_string(row.flow) + "," +
             num(r.time) + "," +
             r.event + "," + std::to_string(r.seq) + "," + num(r.cwnd) + "," + std::to_string(r.cwl) +
             "," + num(r.rto) + "," + metrics::to_string(r.state) + "\n";
    }
  }
  write_file(dir / "trace.csv", out);
}

void write_topology(const std::vector<RunResult>& results, const std::filesystem::path& dir) {
  std::string out = "run,seed,time,node,x,y\n";
  for (const auto& run : results) {
    for (const auto& t : run.topology) {
      out += run.label + "," + std::to_string(run.seed) + "," + num(t.time) + "," + std::to_string(t.node) + "," +
             num(t.position.x) + "," + num(t.position.y) + "\n";
    }
  }
  write_file(dir / "topology.csv", out);
}

}  // namespace manet::harness
