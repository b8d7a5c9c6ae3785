#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bribesim_cli {

/// Numeric table; the header names every column.
struct SweepResult {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  bool operator==(const SweepResult&) const = default;
};

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

void write_csv(std::ostream& os, const SweepResult& r);
/// Throws std::runtime_error on malformed input.
SweepResult read_csv(std::istream& is);

}  // namespace bribesim_cli
