#include <doctest.h>

#include "core/bsm.hpp"
#include "core/error.hpp"
#include "core/montecarlo.hpp"
#include "support.hpp"

using namespace bribesim;
using testing::point;

TEST_CASE("bsm rows are stochastic") {
  for (const auto& p : testing::property_grid()) CHECK_NOTHROW(build_bsm_chain(p, 64).check(1e-12));
}

TEST_CASE("bsm transition rules") {
  const auto m = build_bsm_chain(point(0.3, 0.0, 0.5, 0.0, {0.1}), 64);
  auto pr = [&](const char* a, const char* b) { return m.probability(*m.find(a), *m.find(b)); };
  CHECK(pr("0", "0") == doctest::Approx(0.7));
  CHECK(pr("0", "1") == doctest::Approx(0.3));
  CHECK(pr("1", "2") == doctest::Approx(0.3));
  CHECK(pr("1", "0'o") == doctest::Approx(0.6));
  CHECK(pr("1", "0'b") == doctest::Approx(0.1));
  CHECK(pr("1'", "0'o") == doctest::Approx(0.6));
  CHECK(pr("1'", "0'b") == doctest::Approx(0.1));
  CHECK(pr("1'", "2'") == doctest::Approx(0.3));
  CHECK(pr("3", "2'") == doctest::Approx(0.7));
  CHECK(pr("3'", "2'") == doctest::Approx(0.7));
  CHECK(pr("2", "1'") == doctest::Approx(0.7));
  for (const char* f : {"0'o", "0'b"}) CHECK(pr(f, "0") == 1.0);
  CHECK_FALSE(m.find("0'a"));
}

TEST_CASE("bsm ignores rho") {
  const auto a = bsm_rewards(point(0.3, 0.0, 0.5, 0.02, {0.1}), true);
  const auto b = bsm_rewards(point(0.3, 0.7, 0.5, 0.02, {0.1}), true);
  CHECK(a.adversary == b.adversary);
  CHECK(a.other == b.other);
}

TEST_CASE("bsm winning probabilities") {
  for (const auto& p : testing::property_grid()) {
    const auto w = bsm_winning_probs(p);
    CHECK(std::abs(w.p_public + w.p_private - 1.0) <= 1e-12);
    CHECK(std::abs(w.p0o + w.p0b - 1.0) <= 1e-12);
  }
}

TEST_CASE("bsm reward identities") {
  for (const auto& p0 : testing::property_grid()) {
    auto p = p0;
    const auto occ = bsm_occupancy(p);
    const double ra = bsm_adversary_reward(p, occ);
    const auto acc = bsm_rewards(p, occ, true);
    const auto den = bsm_rewards(p, occ, false);
    CHECK(acc.adversary == doctest::Approx((1 - p.epsilon) * ra).epsilon(1e-14));
    CHECK(std::abs((ra - den.adversary) - occ.f0o * p.betas[0]) < 1e-15);
    CHECK(std::abs(acc.targets[0] - den.targets[0] - p.epsilon * ra) < 1e-15);
    CHECK_NOTHROW(check_invariants(acc, 1e-9));
    CHECK_NOTHROW(check_invariants(den, 1e-9));
    p.epsilon = 0.0;
    CHECK(bsm_rewards(p, occ, true).adversary == ra);
  }
}

TEST_CASE("bsm rewards against an independent dense solve") {
  const auto p = point(0.3, 0.0, 0.5, 0.02, {0.1});
  const auto a = bsm_rewards(p, true);
  CHECK(a.adversary == doctest::Approx(0.229719512195122).epsilon(1e-11));
  CHECK(a.other == doctest::Approx(0.43771777003484313).epsilon(1e-11));
  CHECK(a.targets[0] == doctest::Approx(0.07646515679442503).epsilon(1e-11));
  const auto d = bsm_rewards(p, false);
  CHECK(d.adversary == doctest::Approx(0.22186411149825785).epsilon(1e-11));
  CHECK(d.other == doctest::Approx(0.4502613240418118).epsilon(1e-11));
  CHECK(d.targets[0] == doctest::Approx(0.0717770034843205).epsilon(1e-11));
}

TEST_CASE("bsm accept rewards against simulation" * doctest::may_fail()) {
  // independent simulator: 20 seeds x 1e6 rounds
  const auto a = bsm_rewards(point(0.3, 0.0, 0.5, 0.02, {0.1}), true);
  const double sim[3] = {0.239732157, 0.4261193, 0.077947993};
  const double se[3] = {0.00010096, 0.00016467, 0.00006162};
  const double an[3] = {a.adversary, a.other, a.targets[0]};
  for (int i = 0; i < 3; ++i) CHECK(testing::within_sigma(an[i], sim[i], se[i]));
}

TEST_CASE("bsm deny rewards against simulation" * doctest::may_fail()) {
  const auto d = bsm_rewards(point(0.3, 0.0, 0.5, 0.02, {0.1}), false);
  const double sim[3] = {0.22952795, 0.44085595, 0.07341555};
  const double se[3] = {0.00010685, 0.00016994, 0.00006317};
  const double an[3] = {d.adversary, d.other, d.targets[0]};
  for (int i = 0; i < 3; ++i) CHECK(testing::within_sigma(an[i], sim[i], se[i]));
}

TEST_CASE("in-tree simulator agrees with the independent one") {
  SimConfig c;
  c.params = point(0.3, 0.0, 0.5, 0.02, {0.1});
  c.strategy = Strategy::Bsm;
  c.accept = {true};
  c.rounds = 5000000;
  c.seed = 5;
  const auto s = simulate(c);
  const double sim[3] = {0.239732157, 0.4261193, 0.077947993};
  const double se[3] = {0.00010096, 0.00016467, 0.00006162};
  const Actor who[3] = {Actor::adversary(), Actor::other(), Actor::target(0)};
  for (int i = 0; i < 3; ++i) {
    std::vector<double> w(3, 0.0);
    w[i] = 1.0;
    CHECK(testing::within_sigma(s.reward(who[i]), sim[i], std::hypot(se[i], s.se_of(w)), 4.0));
  }
}

TEST_CASE("bsm epsilon threshold") {
  CHECK(bsm_epsilon_threshold(point(0.3, 0.0, 0.5, 0.0, {0.0})) == 0.0);
  auto p = point(0.3, 0.0, 0.5, 0.0, {0.1});
  const double eps = bsm_epsilon_threshold(p);
  p.epsilon = eps / 2;
  CHECK(bsm_rewards(p, true).adversary > bsm_rewards(p, false).adversary);
  CHECK(eps == doctest::Approx(0.05351170568561875).epsilon(1e-9));
}

TEST_CASE("bsm properties over the grid") {
  int violations = 0;
  for (const auto& p0 : testing::property_grid()) {
    auto p = p0;
    const auto occ = bsm_occupancy(p);
    const auto acc = bsm_rewards(p, occ, true);
    const auto den = bsm_rewards(p, occ, false);
    if (!(acc.targets[0] > den.targets[0])) ++violations;
    if (!(acc.other < den.other)) ++violations;
    const double eps = bsm_epsilon_threshold(p, occ);
    for (double e : {eps - 1e-4, eps + 1e-4, p0.epsilon}) {
      if (e < 0.0 || e > 1.0) continue;
      p.epsilon = e;
      const bool better = bsm_rewards(p, occ, true).adversary > bsm_rewards(p, occ, false).adversary;
      if (better != (e < eps)) ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("bsm monotonicity") {
  for (const auto& p0 : testing::property_grid()) {
    auto p = p0;
    const auto occ = bsm_occupancy(p);
    double prev_ro = 2;
    for (double g = 0.0; g <= 1.0 + 1e-12; g += 0.25) {
      p.gamma = g;
      const double ro = bsm_rewards(p, occ, true).other;
      CHECK(ro <= prev_ro + 1e-15);
      prev_ro = ro;
    }
    p = p0;
    double prev_a = 2, prev_b = -1;
    for (double e = 0.0; e <= 0.2 + 1e-12; e += 0.05) {
      p.epsilon = e;
      const auto r = bsm_rewards(p, occ, true);
      CHECK(r.adversary <= prev_a + 1e-15);
      CHECK(r.targets[0] >= prev_b - 1e-15);
      prev_a = r.adversary;
      prev_b = r.targets[0];
    }
  }
}

TEST_CASE("deny at gamma = 0 matches lead-stubborn mining") {
  auto p = point(0.3, 0.0, 0.0, 0.0, {0.1});
  SimConfig c;
  c.params = p;
  c.strategy = Strategy::Bsm;
  c.accept = {false};
  c.rounds = 5000000;
  c.seed = 8;
  const auto bsm = simulate(c);
  c.params.epsilon = 0.0;
  c.strategy = Strategy::LeadStubborn;
  c.accept.clear();
  const auto ls = simulate(c);
  const double se = std::hypot(bsm.se_of({1.0}), ls.se_of({1.0}));
  CHECK(testing::within_sigma(bsm.reward(Actor::adversary()), ls.reward(Actor::adversary()), se, 4.0));
}
