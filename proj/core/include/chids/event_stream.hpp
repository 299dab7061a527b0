#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "chids/anomaly.hpp"

namespace chids {

// Event streams are line-delimited text:
//
//   # chids-events v1
//   <timestamp> <source> <neighbor> <reception|forward|collision> <message> <digest-hex> <rssi>
//
// Blank lines and further '#' lines are ignored on read.

void write_events(std::ostream& out, std::span<const AnomalyEvent> events);
std::vector<AnomalyEvent> read_events(std::istream& in);
std::vector<AnomalyEvent> read_events(const std::filesystem::path& path);

/// Tab-separated verdict log with a header row.
void write_verdicts(std::ostream& out, std::span<const RuleVerdict> verdicts);

}  // namespace chids
