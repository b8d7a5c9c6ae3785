#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bribesim/bribesim.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

namespace {

bribesim_params* make(double alpha, double rho, double gamma, double eps, std::initializer_list<double> betas) {
  bribesim_params* p = nullptr;
  REQUIRE(bribesim_params_create(&p) == BRIBESIM_OK);
  REQUIRE(bribesim_params_set(p, alpha, rho, gamma, eps) == BRIBESIM_OK);
  REQUIRE(bribesim_params_set_betas(p, betas.begin(), betas.size()) == BRIBESIM_OK);
  return p;
}

}  // namespace

TEST_CASE("version and defaults") {
  CHECK(std::string(bribesim_version()) == "1.0.0");
  const auto o = bribesim_default_solver_options();
  CHECK(o.depth == 64);
  CHECK(o.tolerance == 1e-12);
}

TEST_CASE("null arguments") {
  CHECK(bribesim_params_create(nullptr) == BRIBESIM_ERR_NULL_ARGUMENT);
  CHECK(std::string(bribesim_last_error()).size() > 0);
  bribesim_rewards* r = nullptr;
  CHECK(bribesim_rewards_compute(nullptr, BRIBESIM_MODEL_BSSM, 1, nullptr, &r) == BRIBESIM_ERR_NULL_ARGUMENT);
  CHECK(r == nullptr);
  bribesim_params_destroy(nullptr);
  bribesim_rewards_destroy(nullptr);
}

TEST_CASE("invalid parameters") {
  auto* p = make(0.3, 0.1, 0.5, 0.02, {0.1});
  CHECK(bribesim_params_validate(p) == BRIBESIM_OK);
  // setters store; validation happens on use
  CHECK(bribesim_params_set(p, 0.6, 0.0, 0.0, 0.0) == BRIBESIM_OK);
  CHECK(bribesim_params_validate(p) == BRIBESIM_ERR_INVALID_PARAMETER);
  CHECK(std::string(bribesim_last_error()).find("alpha") != std::string::npos);
  bribesim_rewards* r = nullptr;
  CHECK(bribesim_rewards_compute(p, BRIBESIM_MODEL_BSSM, 1, nullptr, &r) == BRIBESIM_ERR_INVALID_PARAMETER);
  CHECK(r == nullptr);
  REQUIRE(bribesim_params_set(p, 0.3, 1.5, 0.0, 0.0) == BRIBESIM_OK);
  CHECK(bribesim_params_validate(p) == BRIBESIM_ERR_INVALID_PARAMETER);
  REQUIRE(bribesim_params_set(p, 0.3, 0.0, 0.0, 0.0) == BRIBESIM_OK);
  const double big[2] = {0.5, 0.4};
  REQUIRE(bribesim_params_set_betas(p, big, 2) == BRIBESIM_OK);
  CHECK(bribesim_params_validate(p) == BRIBESIM_ERR_INVALID_PARAMETER);
  double out = 0.0;
  CHECK(bribesim_rer(1.0, 0.0, &out) == BRIBESIM_ERR_DOMAIN);
  CHECK(bribesim_rer(1.1, 1.0, &out) == BRIBESIM_OK);
  CHECK(out == doctest::Approx(0.1));
  bribesim_params_destroy(p);
}

TEST_CASE("warnings") {
  auto* p = make(0.3, 0.1, 0.5, 0.02, {0.1});
  CHECK(bribesim_params_warning(p, BRIBESIM_MODEL_BSSM, 0) == nullptr);
  CHECK(bribesim_params_warning(p, BRIBESIM_MODEL_BSM, 0) != nullptr);
  bribesim_params_destroy(p);
}

TEST_CASE("closed-form rewards") {
  auto* p = make(0.3, 0.1, 0.5, 0.02, {0.1});
  bribesim_rewards* r = nullptr;
  REQUIRE(bribesim_rewards_compute(p, BRIBESIM_MODEL_BSSM, 1, nullptr, &r) == BRIBESIM_OK);
  bribesim_reward_view v{};
  REQUIRE(bribesim_rewards_view(r, &v) == BRIBESIM_OK);
  CHECK(v.adversary == doctest::Approx(0.24630352559412302).epsilon(1e-11));
  CHECK(v.other == doctest::Approx(0.47422108532448287).epsilon(1e-11));
  CHECK(v.targets == 1);
  CHECK(v.accept == 1);
  double b = 0.0;
  CHECK(bribesim_rewards_target(r, 0, &b) == BRIBESIM_OK);
  CHECK(b == doctest::Approx(0.08573581275766336).epsilon(1e-11));
  CHECK(bribesim_rewards_target(r, 1, &b) == BRIBESIM_ERR_DOMAIN);
  bribesim_rewards_destroy(r);

  double eps = 0.0;
  REQUIRE(bribesim_epsilon_threshold(p, BRIBESIM_MODEL_BSSM, nullptr, &eps) == BRIBESIM_OK);
  CHECK(eps == doctest::Approx(0.03992428570420464).epsilon(1e-9));
  bribesim_params_destroy(p);
}

TEST_CASE("solver failure maps to a numerical error") {
  auto* p = make(0.4, 0.1, 0.5, 0.02, {0.1});
  bribesim_solver_options o = bribesim_default_solver_options();
  o.tolerance = 1e-300;
  bribesim_rewards* r = nullptr;
  CHECK(bribesim_rewards_compute(p, BRIBESIM_MODEL_BSSM, 1, &o, &r) == BRIBESIM_ERR_NUMERICAL);
  o = bribesim_default_solver_options();
  o.depth = 2;
  CHECK(bribesim_rewards_compute(p, BRIBESIM_MODEL_BSSM, 1, &o, &r) == BRIBESIM_ERR_INVALID_PARAMETER);
  bribesim_params_destroy(p);
}

TEST_CASE("analysis") {
  auto* p = make(0.3, 0.1, 0.5, 0.02, {0.1});
  bribesim_analysis* a = nullptr;
  REQUIRE(bribesim_analyze(p, BRIBESIM_MODEL_BSSM, nullptr, &a) == BRIBESIM_OK);
  bribesim_reward_view acc{}, den{}, base{};
  bribesim_rewards_view(bribesim_analysis_accept(a), &acc);
  bribesim_rewards_view(bribesim_analysis_deny(a), &den);
  bribesim_rewards_view(bribesim_analysis_baseline(a), &base);
  CHECK(acc.adversary == doctest::Approx(0.24630352559412302).epsilon(1e-11));
  CHECK(den.adversary == doctest::Approx(0.24129595231464324).epsilon(1e-11));
  CHECK(base.target_total == 0.0);
  CHECK(bribesim_analysis_threshold(a) == doctest::Approx(0.03992428570420464).epsilon(1e-9));
  const auto w = bribesim_analysis_winning(a);
  CHECK(std::abs(w.p_public + w.p_private - 1.0) < 1e-12);
  CHECK(bribesim_analysis_residual(a) < 1e-12);
  CHECK(bribesim_analysis_states(a) > 64);
  bribesim_analysis_destroy(a);
  bribesim_params_destroy(p);
}

TEST_CASE("chain") {
  auto* p = make(0.3, 0.1, 0.5, 0.02, {0.1});
  bribesim_chain* c = nullptr;
  REQUIRE(bribesim_chain_solve(p, BRIBESIM_MODEL_BSSM, nullptr, &c) == BRIBESIM_OK);
  double sum = 0.0;
  for (size_t i = 0; i < bribesim_chain_size(c); ++i) sum += bribesim_chain_probability(c, i);
  CHECK(std::abs(sum - 1.0) < 1e-10);
  CHECK(std::string(bribesim_chain_label(c, 0)) == "0");
  CHECK(bribesim_chain_at(c, "0") == doctest::Approx(0.6125208473525376).epsilon(1e-10));
  CHECK(bribesim_chain_at(c, "nope") == 0.0);
  CHECK(bribesim_chain_residual(c) < 1e-12);
  CHECK(bribesim_chain_tail_bound(c) < 1e-6);
  bribesim_chain_destroy(c);
  bribesim_params_destroy(p);
}

TEST_CASE("simulation") {
  auto* p = make(0.3, 0.1, 0.5, 0.02, {0.1});
  const int accept[1] = {1};
  const char* path = "capi_trace.tsv";
  bribesim_sim_options o{BRIBESIM_STRATEGY_BSSM, 200000, 7, accept, 1, path};
  bribesim_sim_result* s = nullptr;
  REQUIRE(bribesim_simulate(p, &o, &s) == BRIBESIM_OK);
  CHECK(std::string(bribesim_sim_rng(s)) == "mt19937_64");
  CHECK(bribesim_sim_events(s) == 200000);
  CHECK(bribesim_sim_actors(s) == 3);
  double sum = 0.0;
  uint64_t blocks = 0;
  for (size_t i = 0; i < 3; ++i) {
    sum += bribesim_sim_reward(s, i);
    blocks += bribesim_sim_settled(s, i);
    CHECK(bribesim_sim_reward_se(s, i) > 0.0);
  }
  CHECK(sum == doctest::Approx(static_cast<double>(bribesim_sim_main_chain_length(s)) / 200000));
  CHECK(blocks == bribesim_sim_main_chain_length(s));
  CHECK(bribesim_sim_bribes(s) > 0.0);
  CHECK(bribesim_sim_visit_count(s) > 3);
  const char* label = nullptr;
  uint64_t count = 0;
  double freq = 0, se = 0;
  CHECK(bribesim_sim_visit(s, 0, &label, &count, &freq, &se) == BRIBESIM_OK);
  CHECK(std::string(label) == "0");

  bribesim_rewards* r = nullptr;
  REQUIRE(bribesim_rewards_compute(p, BRIBESIM_MODEL_BSSM, 1, nullptr, &r) == BRIBESIM_OK);
  bribesim_deviation rows[8];
  size_t n = 0;
  REQUIRE(bribesim_sim_compare(s, r, 3.0, rows, 8, &n) == BRIBESIM_OK);
  CHECK(n == 3);
  CHECK(std::string(rows[0].component) == "adversary");
  bribesim_rewards_destroy(r);
  bribesim_sim_destroy(s);

  std::ifstream in(path);
  std::string line;
  CHECK(static_cast<bool>(std::getline(in, line)));
  in.close();
  std::remove(path);

  o.accept_count = 0;
  CHECK(bribesim_simulate(p, &o, &s) == BRIBESIM_ERR_INVALID_PARAMETER);
  o.accept_count = 1;
  o.trace_path = "/nonexistent/dir/trace.tsv";
  CHECK(bribesim_simulate(p, &o, &s) == BRIBESIM_ERR_IO);
  bribesim_params_destroy(p);
}

TEST_CASE("payoff matrix") {
  auto* p = make(0.36, 0.1, 0.0, 0.02, {0.29, 0.27});
  bribesim_payoff* m = nullptr;
  REQUIRE(bribesim_payoff_compute(p, BRIBESIM_MODEL_BSSM, nullptr, &m) == BRIBESIM_OK);
  CHECK(bribesim_payoff_targets(m) == 2);
  CHECK(bribesim_payoff_profiles(m) == 4);
  CHECK(bribesim_payoff_accepts(m, 0, 0) == 1);
  CHECK(bribesim_payoff_accepts(m, 1, 0) == 0);
  CHECK(100 * bribesim_payoff_rer(m, 0, 0) == doctest::Approx(-3.2104054314204933).epsilon(1e-9));
  CHECK(bribesim_payoff_is_nash(m, 0) == 1);
  CHECK(bribesim_payoff_is_nash(m, 3) == 0);
  const auto d = bribesim_payoff_dilemma(m);
  CHECK(d.dilemma == 1);
  CHECK(d.all_accept_is_nash == 1);
  CHECK(bribesim_payoff_rewards(m, 3) != nullptr);
  bribesim_payoff_destroy(m);

  const double many[11] = {0.02, 0.02, 0.02, 0.02, 0.02, 0.02, 0.02, 0.02, 0.02, 0.02, 0.02};
  REQUIRE(bribesim_params_set_betas(p, many, 11) == BRIBESIM_OK);
  CHECK(bribesim_payoff_compute(p, BRIBESIM_MODEL_BSSM, nullptr, &m) == BRIBESIM_ERR_SIZE);
  bribesim_params_destroy(p);
}
