#include "cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace bribesim_cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const SweepResult& r) {
  for (std::size_t i = 0; i < r.header.size(); ++i) os << (i ? "," : "") << r.header[i];
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = first + s.size();
  if (!s.empty() && s[0] == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw std::runtime_error("bad number in CSV: '" + s + "'");
  return v;
}

}  // namespace

SweepResult read_csv(std::istream& is) {
  SweepResult r;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  r.header = split(line);
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != r.header.size()) throw std::runtime_error("CSV row width differs from the header");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse(c));
    r.rows.push_back(std::move(row));
  }
  return r;
}

}  // namespace bribesim_cli
