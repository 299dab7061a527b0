#include "run_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "chids/error.hpp"

namespace chids::cli {

namespace {

Error bad_value(std::string_view key, std::string_view value) {
  return Error(ErrorCode::InvalidConfig,
               "bad value for " + std::string(key) + ": '" + std::string(value) + "'");
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T integer(std::string_view key, std::string_view value) {
  T v{};
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || p != value.data() + value.size()) throw bad_value(key, value);
  return v;
}

double real(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || p != value.data() + value.size()) throw bad_value(key, value);
  return v;
}

bool boolean(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw bad_value(key, value);
}

std::vector<std::string> list(std::string_view value) {
  std::vector<std::string> items;
  if (value == "none") return items;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto item = trim(value.substr(start, comma - start));
    if (!item.empty()) items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

std::string join(const std::vector<std::string>& items) {
  if (items.empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "," : "") + items[i];
  return s;
}

std::string num(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "dataset") {
    dataset = std::string(value);
  } else if (key == "out") {
    out = std::string(value);
  } else if (key == "seed") {
    split.seed = integer<std::uint64_t>(key, value);
  } else if (key == "threads") {
    threads = integer<unsigned>(key, value);
  } else if (key == "ingest.strict") {
    ingest_strict = boolean(key, value);
  } else if (key == "ingest.error_budget") {
    ingest_error_budget = integer<std::size_t>(key, value);
  } else if (key == "split.train_size") {
    split.train_size = integer<std::size_t>(key, value);
  } else if (key == "split.test_size") {
    split.test_size = integer<std::size_t>(key, value);
  } else if (key == "split.minority") {
    split.minority.clear();
    for (const auto& name : list(value)) {
      const auto c = parse_attack_class(name);
      if (!c) throw bad_value(key, value);
      split.minority.push_back(*c);
    }
  } else if (key == "prune") {
    prune = list(value);
  } else if (key == "select.method") {
    if (value == "chi2") {
      select_method = RankMethod::ChiSquared;
    } else if (value == "igr") {
      select_method = RankMethod::InfoGainRatio;
    } else {
      throw bad_value(key, value);
    }
  } else if (key == "select.k") {
    select_k = integer<std::size_t>(key, value);
  } else if (key == "part.min_leaf") {
    part.min_leaf = integer<std::size_t>(key, value);
  } else if (key == "part.confidence") {
    part.confidence = real(key, value);
  } else if (key == "part.prune") {
    part.prune = boolean(key, value);
  } else if (key == "anomaly.interval_lower") {
    anomaly.interval_lower = real(key, value);
  } else if (key == "anomaly.interval_upper") {
    anomaly.interval_upper = real(key, value);
  } else if (key == "anomaly.retransmission_deadline") {
    anomaly.retransmission_deadline = real(key, value);
  } else if (key == "anomaly.delay_window") {
    anomaly.delay_window = real(key, value);
  } else if (key == "anomaly.repetition_limit") {
    anomaly.repetition_limit = integer<std::size_t>(key, value);
  } else if (key == "anomaly.rssi_min") {
    anomaly.rssi_min = real(key, value);
  } else if (key == "anomaly.rssi_max") {
    anomaly.rssi_max = real(key, value);
  } else if (key == "anomaly.max_senders_per_message") {
    anomaly.max_senders_per_message = integer<std::size_t>(key, value);
  } else if (key == "anomaly.collision_limit") {
    anomaly.collision_limit = integer<std::size_t>(key, value);
  } else if (key == "anomaly.window") {
    anomaly.window = real(key, value);
  } else if (key == "stream.duration") {
    stream.duration = real(key, value);
  } else if (key == "stream.nodes") {
    stream.nodes = integer<std::uint32_t>(key, value);
  } else if (key == "pipeline.policy") {
    policy = parse_decision_policy(value);
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown config key: " + std::string(key));
  }
}

void RunConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw Error(ErrorCode::InvalidConfig, "expected key=value, got '" + std::string(assignment) + "'");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void RunConfig::validate() const {
  if (select_k == 0) throw Error(ErrorCode::InvalidConfig, "select.k must be positive");
  if (part.min_leaf == 0) throw Error(ErrorCode::InvalidConfig, "part.min_leaf must be positive");
  if (!(part.confidence > 0.0 && part.confidence < 1.0))
    throw Error(ErrorCode::InvalidConfig, "part.confidence must lie in (0, 1)");
  if (!(stream.duration > 0.0) || stream.nodes < 3)
    throw Error(ErrorCode::InvalidConfig, "stream needs a positive duration and at least 3 nodes");
  anomaly.validate();
}

void RunConfig::write(std::ostream& o, bool with_runtime) const {
  std::string minority;
  for (std::size_t i = 0; i < split.minority.size(); ++i)
    minority += std::string(i ? "," : "") + std::string(to_string(split.minority[i]));
  if (minority.empty()) minority = "none";

  o << "# chids run configuration\n";
  o << "dataset = " << dataset.string() << '\n';
  if (with_runtime) o << "out = " << out.string() << '\n';
  o << "seed = " << split.seed << '\n';
  if (with_runtime) o << "threads = " << threads << '\n';
  o << "ingest.strict = " << (ingest_strict ? "true" : "false") << '\n';
  o << "ingest.error_budget = " << ingest_error_budget << '\n';
  o << "split.train_size = " << split.train_size << '\n';
  o << "split.test_size = " << split.test_size << '\n';
  o << "split.minority = " << minority << '\n';
  o << "prune = " << join(prune) << '\n';
  o << "select.method = " << (select_method == RankMethod::ChiSquared ? "chi2" : "igr") << '\n';
  o << "select.k = " << select_k << '\n';
  o << "part.min_leaf = " << part.min_leaf << '\n';
  o << "part.confidence = " << num(part.confidence) << '\n';
  o << "part.prune = " << (part.prune ? "true" : "false") << '\n';
  o << "anomaly.interval_lower = " << num(anomaly.interval_lower) << '\n';
  o << "anomaly.interval_upper = " << num(anomaly.interval_upper) << '\n';
  o << "anomaly.retransmission_deadline = " << num(anomaly.retransmission_deadline) << '\n';
  o << "anomaly.delay_window = " << num(anomaly.delay_window) << '\n';
  o << "anomaly.repetition_limit = " << anomaly.repetition_limit << '\n';
  o << "anomaly.rssi_min = " << num(anomaly.rssi_min) << '\n';
  o << "anomaly.rssi_max = " << num(anomaly.rssi_max) << '\n';
  o << "anomaly.max_senders_per_message = " << anomaly.max_senders_per_message << '\n';
  o << "anomaly.collision_limit = " << anomaly.collision_limit << '\n';
  o << "anomaly.window = " << num(anomaly.window) << '\n';
  o << "stream.duration = " << num(stream.duration) << '\n';
  o << "stream.nodes = " << stream.nodes << '\n';
  o << "pipeline.policy = " << to_string(policy) << '\n';
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidConfig,
                  "config line " + std::to_string(number) + ": expected key = value");
    cfg.set(trim(view.substr(0, eq)), view.substr(eq + 1));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config " + path.string());
  return parse_config(in);
}

}  // namespace chids::cli
