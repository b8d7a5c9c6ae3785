#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli/csv.hpp"

namespace bribesim_cli {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Axis {
  std::string name;
  std::vector<double> values;
};

/// "name=start:stop:count", "name=v1,v2,..." or "name=v". Values must be
/// strictly increasing.
Axis parse_axis(const std::string& spec);

struct RunConfig {
  std::string command;
  double alpha = 0.0;
  double rho = 0.0;
  double gamma = 0.0;
  double epsilon = 0.0;
  std::vector<double> betas;
  std::string model = "bssm";
  std::string strategy;  // simulate only; defaults to the model
  std::vector<int> accept;
  int depth = 64;
  double tolerance = 1e-12;
  std::uint64_t seed = 1;
  std::uint64_t rounds = 1000000;
  std::string out;
  std::string trace;
  std::vector<Axis> axes;
  bool game = false;
  std::set<std::string> explicit_params;  // parameters given by flag or config file
};

/// Evaluates every grid cell; rows are ordered lexicographically by axis.
SweepResult run_sweep(const RunConfig& cfg);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bribesim_cli
