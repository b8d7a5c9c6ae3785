#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "cli/csv.hpp"

using namespace bribesim_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bribesim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

SweepResult load(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  return read_csv(in);
}

std::size_t column(const SweepResult& r, const std::string& name) {
  for (std::size_t i = 0; i < r.header.size(); ++i)
    if (r.header[i] == name) return i;
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_CASE("csv round trip") {
  SweepResult r{{"a", "b"}, {{0.1, 1.0 / 3}, {-2e-300, std::numeric_limits<double>::infinity()}}};
  std::stringstream ss;
  write_csv(ss, r);
  CHECK(read_csv(ss) == r);
  std::stringstream bad("a,b\n1,x\n");
  CHECK_THROWS(read_csv(bad));
  std::stringstream ragged("a,b\n1\n");
  CHECK_THROWS(read_csv(ragged));
}

TEST_CASE("nan survives the round trip") {
  SweepResult r{{"a"}, {{std::nan("")}}};
  std::stringstream ss;
  write_csv(ss, r);
  CHECK(std::isnan(read_csv(ss).rows[0][0]));
}

TEST_CASE("axis parsing") {
  auto a = parse_axis("alpha=0.1:0.3:3");
  CHECK(a.name == "alpha");
  REQUIRE(a.values.size() == 3);
  CHECK(a.values[1] == doctest::Approx(0.2));
  CHECK(parse_axis("gamma=0,0.5,1").values.size() == 3);
  CHECK(parse_axis("rho=0.2").values.size() == 1);
  CHECK_THROWS_AS(parse_axis("gamma=1,0.5"), ConfigError);
  CHECK_THROWS_AS(parse_axis("gamma"), ConfigError);
  CHECK_THROWS_AS(parse_axis("gamma=0:1:0"), ConfigError);
}

TEST_CASE("analyze") {
  auto r = cli({"analyze", "--alpha", "0.3", "--rho", "0.1", "--gamma", "0.5", "--epsilon", "0.02", "--beta", "0.1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("epsilon threshold       0.039924") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(cli({"analyze", "--alpha", "0.6", "--beta", "0.1"}).code == 2);
  CHECK(cli({"analyze", "--beta", "0.1"}).code == 2);
  CHECK(cli({"analyze", "--alpha", "0.3", "--model", "pow"}).code == 2);
  CHECK(cli({"analyze", "--alpha", "0.4", "--rho", "0.1", "--gamma", "0.5", "--beta", "0.1", "--tol", "1e-300"}).code == 3);
  CHECK(cli({"analyze", "--alpha", "0.3", "--beta", "0.1", "-K", "2"}).code == 2);
  CHECK(cli({"bogus"}).code == 2);
}

TEST_CASE("no targets gives a zero threshold") {
  auto r = cli({"analyze", "--alpha", "0.3", "--rho", "0.1", "--beta", "0"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("epsilon threshold       0.000000") != std::string::npos);
}

TEST_CASE("single point sweep") {
  auto r = cli({"sweep", "--alpha", "0.3", "--rho", "0.1", "--epsilon", "0.02", "--beta", "0.1", "--axis",
                "gamma=0.5", "--out", "one.csv"});
  REQUIRE(r.code == 0);
  const auto t = load("one.csv");
  CHECK(t.rows.size() == 1);
  CHECK(t.rows[0][column(t, "ra_accept")] == doctest::Approx(0.24630352559412302).epsilon(1e-11));
  std::remove("one.csv");
}

TEST_CASE("grid sweep") {
  auto r = cli({"sweep", "--rho", "0.1", "--epsilon", "0.02", "--beta", "0.1", "--axis", "alpha=0.1:0.4:4", "--axis",
                "gamma=0,1", "--alpha", "0.3", "--out", "grid.csv"});
  CHECK(r.code == 2);  // alpha is both fixed and swept
  r = cli({"sweep", "--alpha", "0.3", "--rho", "0.1", "--beta", "0.1", "--axis", "gamma=0,0.5,1", "--axis",
           "epsilon=0.01:0.05:5", "--out", "grid.csv"});
  REQUIRE(r.code == 0);
  const auto t = load("grid.csv");
  CHECK(t.rows.size() == 15);
  CHECK(t.header[0] == "gamma");
  CHECK(t.header[1] == "epsilon");
  CHECK(t.rows[0][0] == 0.0);
  CHECK(t.rows[1][1] == doctest::Approx(0.02));
  std::remove("grid.csv");
}

TEST_CASE("axis errors") {
  CHECK(cli({"sweep", "--alpha", "0.3", "--beta", "0.1", "--model", "bsm", "--axis", "rho=0:0.5:3"}).code == 2);
  CHECK(cli({"sweep", "--alpha", "0.3", "--beta", "0.1", "--axis", "delta=0:0.5:3"}).code == 2);
  CHECK(cli({"sweep", "--alpha", "0.3", "--beta", "0.1", "--axis", "gamma=0,1", "--axis", "gamma=0,1"}).code == 2);
  CHECK(cli({"sweep", "--alpha", "0.3", "--beta", "0.1,0.1", "--axis", "beta=0.1,0.2"}).code == 2);
  CHECK(cli({"sweep", "--alpha", "0.3", "--beta", "0.1", "--axis", "gamma=0,1", "--axis", "rho=0,1", "--axis",
             "epsilon=0,1", "--axis", "beta=0.1,0.2"})
            .code == 2);
  auto r = cli({"sweep", "--alpha", "0.3", "--beta", "0.1", "--axis", "beta=0.1:0.9:5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("beta=") != std::string::npos);
}

TEST_CASE("game sweep over the second target") {
  auto r = cli({"sweep", "--alpha", "0.36", "--rho", "0.1", "--epsilon", "0.02", "--beta", "0.29,0.27", "--axis",
                "beta2=0.1,0.27", "--out", "game.csv"});
  REQUIRE(r.code == 0);
  const auto t = load("game.csv");
  CHECK(t.rows.size() == 2);
  CHECK(t.rows[1][column(t, "dilemma")] == 1.0);
  std::remove("game.csv");
}

TEST_CASE("simulate is deterministic") {
  const std::vector<std::string> args = {"simulate", "--alpha", "0.3", "--rho", "0.1", "--gamma", "0.5", "--epsilon",
                                         "0.02", "--beta", "0.1", "--accept", "1", "--rounds", "100000", "--seed", "9"};
  auto a = cli(args);
  auto b = cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("mt19937_64") != std::string::npos);
}

TEST_CASE("simulate warns about unused parameters") {
  auto r = cli({"simulate", "--alpha", "0.3", "--rho", "0.1", "--epsilon", "0.05", "--strategy", "selfish",
                "--rounds", "10000"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("dilemma") {
  auto r = cli({"dilemma", "--alpha", "0.36", "--rho", "0.1", "--epsilon", "0.02", "--beta", "0.29,0.27"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("-3.2104%") != std::string::npos);
  CHECK(r.out.find("dilemma: yes") != std::string::npos);
  r = cli({"dilemma", "--alpha", "0.3", "--epsilon", "0.02", "--beta", "0.1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("accept dominant: yes") != std::string::npos);
  r = cli({"dilemma", "--alpha", "0.2", "--beta", "0.02,0.02,0.02,0.02,0.02,0.02,0.02,0.02,0.02,0.02,0.02"});
  CHECK(r.code == 2);
}

TEST_CASE("config file with flag override") {
  {
    std::ofstream f("run.ini");
    f << "[analyze]\nalpha=0.3\nrho=0.1\ngamma=0.5\nepsilon=0.02\nbeta=0.1\n";
  }
  auto a = cli({"analyze", "--config", "run.ini"});
  REQUIRE(a.code == 0);
  CHECK(a.out.find("epsilon threshold       0.039924") != std::string::npos);
  auto b = cli({"analyze", "--config", "run.ini", "--gamma", "0"});
  REQUIRE(b.code == 0);
  CHECK(b.out.find("gamma      0\n") != std::string::npos);
  CHECK(cli({"analyze", "--config", "missing.ini"}).code == 2);
  std::remove("run.ini");
}

TEST_CASE("growth") {
  auto r = cli({"growth", "--alpha", "0.3", "--rho", "0.1", "--beta", "0.1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("gr_ssm   0.730000000") != std::string::npos);
}
