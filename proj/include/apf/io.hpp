#pragma once

// JSON files for patterns, configurations and reports; traces as JSON lines.
// Doubles are written in shortest round-trip form.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "apf/sim.hpp"

namespace apf {

// {"points": [[x, y], ...], "epsilon": e}. Validated.
Pattern parse_pattern(const std::string& text);
// {"points": [[x, y], ...]}. Validated.
std::vector<Point> parse_configuration(const std::string& text);
std::string pattern_json(const Pattern& pattern);
std::string configuration_json(std::span<const Point> points);

// One event per line: t, robot, kind, then the fields the event carries.
std::string trace_line(const TraceEvent& event);
void write_trace(std::ostream& out, const Trace& trace);
// Throws Parse on malformed or truncated input.
TraceEvent parse_trace_line(const std::string& line);
Trace read_trace(std::istream& in);

std::string report_json(const RunReport& report, const RunOptions& options);

// Whole-file helpers; Parse on unreadable files.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace apf
