#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace agrisense::csv {

// Splits one CSV record on commas. The formats in this project never quote
// fields, so no quote handling is needed; a trailing '\r' is stripped.
std::vector<std::string> split(const std::string& line);

// Reads the next non-empty line; returns nullopt at EOF.
std::optional<std::string> next_line(std::istream& in);

// strtod-based, rejects trailing junk and empty fields; nullopt on failure.
std::optional<double> parse_double(const std::string& field);
std::optional<long long> parse_int(const std::string& field);

// Shortest round-trip formatting so written files re-parse to the same bits.
std::string format_double(double v);

}  // namespace agrisense::csv
