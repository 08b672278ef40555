#include "manet/harness/scenario.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace manet::harness {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> entries;
};

double to_double(const std::string& key, const Entry& e) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc{} || ptr != e.value.data() + e.value.size()) {
    throw ScenarioError("expected a number for '" + key + "'", e.line, key);
  }
  return v;
}

std::uint64_t to_uint(const std::string& key, const Entry& e) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc{} || ptr != e.value.data() + e.value.size()) {
    throw ScenarioError("expected a non-negative integer for '" + key + "'", e.line, key);
  }
  return v;
}

std::vector<net::Position> to_positions(const std::string& key, const Entry& e) {
  // "x:y x:y ..." or "x,y; x,y; ..."
  std::vector<net::Position> out;
  std::string text = e.value;
  for (char& c : text) {
    if (c == ';') c = ' ';
    if (c == ',') c = ':';
  }
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    auto colon = token.find(':');
    if (colon == std::string::npos) {
      throw ScenarioError("malformed position '" + token + "' in '" + key + "'", e.line, key);
    }
    Entry xs{token.substr(0, colon), e.line};
    Entry ys{token.substr(colon + 1), e.line};
    out.push_back({to_double(key, xs), to_double(key, ys)});
  }
  return out;
}

/// Applies known keys of one section and rejects anything left over.
class SectionReader {
 public:
  SectionReader(std::string name, const Section& section) : name_(std::move(name)), section_(section) {}

  template <typename F>
  void on(const std::string& key, F&& apply) {
    auto it = section_.entries.find(key);
    if (it == section_.entries.end()) return;
    used_.insert(key);
    apply(key, it->second);
  }
  void number(const std::string& key, double& target) {
    on(key, [&](const std::string& k, const Entry& e) { target = to_double(k, e); });
  }
  template <typename T>
  void integer(const std::string& key, T& target) {
    on(key, [&](const std::string& k, const Entry& e) { target = static_cast<T>(to_uint(k, e)); });
  }
  void finish() const {
    for (const auto& [key, entry] : section_.entries) {
      if (!used_.count(key)) {
        throw ScenarioError("unknown key '" + key + "' in [" + name_ + "]", entry.line, key);
      }
    }
  }

 private:
  std::string name_;
  const Section& section_;
  std::set<std::string> used_;
};

transport::PolicyKind policy_value(const std::string& key, const Entry& e) {
  auto p = transport::parse_policy(e.value);
  if (!p) throw ScenarioError("policy must be tcp, adtcp or madtcp", e.line, key);
  return *p;
}

}  // namespace

ScenarioError::ScenarioError(const std::string& message, int line, std::string key)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line),
      key_(std::move(key)) {}

std::vector<FlowConfig> default_flows() {
  FlowConfig cbr1;
  cbr1.id = 0;
  cbr1.kind = FlowKind::Cbr;
  cbr1.src = 0;
  cbr1.dst = 3;
  cbr1.rate = 1e6;
  cbr1.packet_size = 1500;

  FlowConfig cbr2 = cbr1;
  cbr2.id = 1;
  cbr2.src = 3;
  cbr2.dst = 4;
  cbr2.rate = 0.75e6;

  FlowConfig ftp;
  ftp.id = 2;
  ftp.kind = FlowKind::Ftp;
  ftp.src = 1;
  ftp.dst = 2;
  ftp.packet_size = 1000;
  ftp.policy = transport::PolicyKind::Madtcp;
  return {cbr1, cbr2, ftp};
}

Scenario default_scenario() {
  Scenario s;
  s.flows = default_flows();
  return s;
}

void Scenario::validate() const {
  auto fail = [](const std::string& key, const std::string& msg) {
    throw ScenarioError("invalid '" + key + "': " + msg, 0, key);
  };
  const auto n = network.node_count;
  if (n < 2) fail("nodes", "need at least two nodes");
  if (!(network.range > 0)) fail("range", "must be positive");
  if (!(network.mac.bit_rate > 0)) fail("bit_rate", "must be positive");
  if (network.mac.retry_limit < 1) fail("retry_limit", "must be at least 1");
  if (network.queue_length < 1) fail("queue_length", "must be at least 1");
  if (!(network.mobility.field_width > 0)) fail("field_width", "must be positive");
  if (!(network.mobility.field_height > 0)) fail("field_height", "must be positive");
  if (network.mobility.max_speed < 0) fail("max_speed", "must be non-negative");
  if (!(network.mobility_step > 0)) fail("step", "must be positive");
  if (network.segment_loss < 0 || network.segment_loss >= 1) fail("segment_loss", "must be in [0, 1)");
  if (network.mac.base_collision < 0 || network.mac.base_collision >= 1) {
    fail("collision_base", "must be in [0, 1)");
  }
  if (!positions.empty()) {
    if (positions.size() != n) fail("positions", "need one position per node");
    for (auto p : positions) {
      if (p.x < 0 || p.y < 0 || p.x > network.mobility.field_width ||
          p.y > network.mobility.field_height) {
        fail("positions", "position outside the field");
      }
    }
  }
  if (flows.empty()) fail("flow", "at least one flow is required");
  for (const auto& f : flows) {
    std::string prefix = "flow." + std::to_string(f.id) + ".";
    if (f.src >= n) fail(prefix + "src", "node " + std::to_string(f.src) + " does not exist");
    if (f.dst >= n) fail(prefix + "dst", "node " + std::to_string(f.dst) + " does not exist");
    if (f.src == f.dst) fail(prefix + "dst", "must differ from src");
    if (f.kind == FlowKind::Cbr && !(f.rate > 0)) fail(prefix + "rate", "CBR rate must be positive");
    if (f.packet_size == 0) fail(prefix + "packet_size", "must be positive");
    if (f.start < 0) fail(prefix + "start", "must be non-negative");
  }
  try {
    policy.validate();
  } catch (const std::invalid_argument& e) {
    fail("cwl_min", e.what());
  }
  if (!(metrics.delta > 0)) fail("delta", "must be positive");
  if (metrics.history < 1) fail("history", "must be at least 1");
  if (!(duration > 0)) fail("duration", "must be positive");
  if (!(window_start < window_end)) fail("window_start", "must precede window_end");
  if (!(duration > window_start)) fail("window_start", "must lie before the end of the run");
  if (window_end > duration) fail("window_end", "must not exceed duration");
  if (iterations < 1) fail("iterations", "must be at least 1");
  if (transport.rtt.rto_min > transport.rtt.rto_max) fail("rto_min", "must not exceed rto_max");
}

Scenario parse_scenario(std::string_view text) {
  std::map<std::string, Section> sections;
  std::map<std::uint64_t, Section> flow_sections;
  static const std::set<std::string> kKnown = {"network", "mobility", "policy", "experiment"};

  Section* current = nullptr;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto hash = raw.find('#');
    std::string_view line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ScenarioError("unterminated section header", line_no);
      std::string name(trim(line.substr(1, line.size() - 2)));
      if (name.rfind("flow.", 0) == 0) {
        Entry idx{name.substr(5), line_no};
        auto id = to_uint("flow", idx);
        if (flow_sections.count(id)) throw ScenarioError("duplicate section [" + name + "]", line_no);
        current = &flow_sections[id];
      } else if (kKnown.count(name)) {
        if (sections.count(name)) throw ScenarioError("duplicate section [" + name + "]", line_no);
        current = &sections[name];
      } else {
        throw ScenarioError("unknown section [" + name + "]", line_no);
      }
      current->line = line_no;
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ScenarioError("expected key = value", line_no);
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ScenarioError("empty key", line_no);
    if (!current) throw ScenarioError("key '" + key + "' outside any section", line_no, key);
    if (current->entries.count(key)) {
      throw ScenarioError("duplicate key '" + key + "'", line_no, key);
    }
    current->entries.emplace(key, Entry{value, line_no});
  }

  Scenario s = default_scenario();

  if (auto it = sections.find("network"); it != sections.end()) {
    SectionReader r("network", it->second);
    auto& n = s.network;
    r.integer("nodes", n.node_count);
    r.number("field_width", n.mobility.field_width);
    r.number("field_height", n.mobility.field_height);
    r.number("range", n.range);
    r.number("bit_rate", n.mac.bit_rate);
    r.integer("queue_length", n.queue_length);
    r.integer("retry_limit", n.mac.retry_limit);
    r.number("slot_time", n.mac.slot_time);
    r.integer("cw_min", n.mac.cw_min);
    r.integer("cw_max", n.mac.cw_max);
    r.number("mac_overhead", n.mac.overhead);
    r.number("collision_base", n.mac.base_collision);
    r.number("discovery_per_hop", n.discovery_per_hop);
    r.number("discovery_retry", n.discovery_retry);
    r.integer("send_buffer", n.send_buffer);
    r.number("segment_loss", n.segment_loss);
    r.integer("header_bytes", s.header_bytes);
    r.on("routing", [](const std::string& k, const Entry& e) {
      if (e.value != "dsr") throw ScenarioError("only 'dsr' routing is available", e.line, k);
    });
    r.finish();
  }

  if (auto it = sections.find("mobility"); it != sections.end()) {
    SectionReader r("mobility", it->second);
    r.number("max_speed", s.network.mobility.max_speed);
    r.number("pause_time", s.network.mobility.pause_time);
    r.number("step", s.network.mobility_step);
    r.on("positions", [&](const std::string& k, const Entry& e) { s.positions = to_positions(k, e); });
    r.on("model", [](const std::string& k, const Entry& e) {
      if (e.value != "random_waypoint") {
        throw ScenarioError("only 'random_waypoint' mobility is available", e.line, k);
      }
    });
    r.finish();
  }

  if (auto it = sections.find("policy"); it != sections.end()) {
    SectionReader r("policy", it->second);
    auto& p = s.policy;
    auto& m = s.metrics;
    auto& t = s.transport;
    auto signed_int = [](int& target) {
      return [&target](const std::string& k, const Entry& e) {
        target = static_cast<int>(to_uint(k, e));
      };
    };
    r.on("cwl_fixed", signed_int(p.cwl_fixed));
    r.on("cwl_min", signed_int(p.cwl_min));
    r.on("cwl_max", signed_int(p.cwl_max));
    r.on("tcp_window", signed_int(p.tcp_window));
    r.number("probe_interval", p.probe_interval);
    r.number("delta", m.delta);
    r.integer("history", m.history);
    r.number("threshold", m.threshold);
    r.integer("smoothing", m.smoothing);
    r.on("idd_divisor", [&](const std::string& k, const Entry& e) {
      if (e.value == "literal") {
        m.divisor = metrics::IddDivisor::Literal;
      } else if (e.value == "valid_pairs") {
        m.divisor = metrics::IddDivisor::ValidPairs;
      } else {
        throw ScenarioError("idd_divisor must be literal or valid_pairs", e.line, k);
      }
    });
    r.on("force_state", [&](const std::string& k, const Entry& e) {
      auto st = metrics::parse_network_state(e.value);
      if (!st) throw ScenarioError("unknown network state '" + e.value + "'", e.line, k);
      m.forced_state = st;
    });
    r.number("rto_min", t.rtt.rto_min);
    r.number("rto_max", t.rtt.rto_max);
    r.number("rto_initial", t.rtt.rto_initial);
    r.integer("max_rto_backoffs", t.max_rto_backoffs);
    r.finish();
  }

  if (auto it = sections.find("experiment"); it != sections.end()) {
    SectionReader r("experiment", it->second);
    r.number("duration", s.duration);
    r.number("window_start", s.window_start);
    r.number("window_end", s.window_end);
    r.integer("iterations", s.iterations);
    r.integer("seed", s.seed);
    r.finish();
  }

  if (!flow_sections.empty()) {
    s.flows.clear();
    for (const auto& [id, section] : flow_sections) {
      std::string name = "flow." + std::to_string(id);
      SectionReader r(name, section);
      FlowConfig f;
      f.id = static_cast<net::FlowId>(id);
      bool have_kind = false, have_size = false;
      r.on("kind", [&](const std::string& k, const Entry& e) {
        if (e.value == "cbr") {
          f.kind = FlowKind::Cbr;
        } else if (e.value == "ftp") {
          f.kind = FlowKind::Ftp;
        } else {
          throw ScenarioError("flow kind must be cbr or ftp", e.line, k);
        }
        have_kind = true;
      });
      if (!have_kind) throw ScenarioError("missing 'kind' in [" + name + "]", section.line, "kind");
      r.integer("src", f.src);
      r.integer("dst", f.dst);
      r.number("rate", f.rate);
      r.on("packet_size", [&](const std::string& k, const Entry& e) {
        f.packet_size = static_cast<std::uint32_t>(to_uint(k, e));
        have_size = true;
      });
      if (!have_size) f.packet_size = f.kind == FlowKind::Cbr ? 1500 : 1000;
      r.on("policy", [&](const std::string& k, const Entry& e) { f.policy = policy_value(k, e); });
      r.number("start", f.start);
      r.number("stop", f.stop);
      r.finish();
      s.flows.push_back(f);
    }
  }

  // Without an explicit window the measurement covers the last third of the run.
  const auto& exp_entries = sections["experiment"].entries;
  if (!exp_entries.count("window_start")) s.window_start = s.duration * 2.0 / 3.0;
  if (!exp_entries.count("window_end")) s.window_end = s.duration;
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

}  // namespace manet::harness
