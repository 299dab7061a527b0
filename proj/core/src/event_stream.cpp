#include "chids/event_stream.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "chids/error.hpp"

namespace chids {

namespace {

constexpr const char* kMagic = "# chids-events v1";

std::string number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& line) {
  throw Error(ErrorCode::FormatError,
              "events line " + std::to_string(line_no) + ": cannot parse '" + line + "'");
}

}  // namespace

void write_events(std::ostream& out, std::span<const AnomalyEvent> events) {
  out << kMagic << '\n';
  out << "# timestamp source neighbor kind message digest rssi\n";
  char digest[32];
  for (const auto& e : events) {
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(e.digest));
    out << number(e.timestamp) << ' ' << e.source << ' ' << e.neighbor << ' ' << to_string(e.kind)
        << ' ' << e.message << ' ' << digest << ' ' << number(e.rssi) << '\n';
  }
}

std::vector<AnomalyEvent> read_events(std::istream& in) {
  std::vector<AnomalyEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string ts, kind, digest, rssi;
    AnomalyEvent e;
    if (!(ss >> ts >> e.source >> e.neighbor >> kind >> e.message >> digest >> rssi))
      bad_line(line_no, line);
    auto parse = [&](const std::string& s, double& v) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) bad_line(line_no, line);
    };
    parse(ts, e.timestamp);
    parse(rssi, e.rssi);
    auto [ptr, ec] = std::from_chars(digest.data(), digest.data() + digest.size(), e.digest, 16);
    if (ec != std::errc() || ptr != digest.data() + digest.size()) bad_line(line_no, line);
    if (kind == "reception")
      e.kind = EventKind::Reception;
    else if (kind == "forward")
      e.kind = EventKind::ForwardObserved;
    else if (kind == "collision")
      e.kind = EventKind::Collision;
    else
      bad_line(line_no, line);
    events.push_back(e);
  }
  return events;
}

std::vector<AnomalyEvent> read_events(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read events " + path.string());
  return read_events(in);
}

void write_verdicts(std::ostream& out, std::span<const RuleVerdict> verdicts) {
  out << "event\trule\ttimestamp\tsource\tmessage\ttags\n";
  for (const auto& v : verdicts) {
    out << v.event << '\t' << to_string(v.rule) << '\t' << number(v.timestamp) << '\t' << v.source
        << '\t' << v.message << '\t';
    const auto tags = v.tags();
    for (std::size_t i = 0; i < tags.size(); ++i) out << (i ? "," : "") << to_string(tags[i]);
    out << '\n';
  }
}

}  // namespace chids
