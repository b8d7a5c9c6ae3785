#include "core/bsm.hpp"

#include <vector>

#include "core/error.hpp"

namespace bribesim {

std::string BsmState::label() const {
  switch (kind) {
    case Kind::Zero:
      return "0";
    case Kind::Ladder:
      return std::to_string(k);
    case Kind::LadderPrime:
      return std::to_string(k) + "'";
    case Kind::ZeroPrimeO:
      return "0'o";
    case Kind::ZeroPrimeB:
      return "0'b";
  }
  return {};
}

TransitionModel build_bsm_chain(const StrategyParams& params, int depth) {
  validate(params);
  validate(SolverOptions{depth, 1.0});
  const double a = params.alpha;
  const double beta = params.target_power();
  const double o = 1.0 - a - beta;
  const double q = 1.0 - a;

  using K = BsmState::Kind;
  TransitionModel m(depth, a);
  const std::size_t zero = m.add_state("0");
  std::vector<std::size_t> lad(depth + 1), pri(depth + 1);
  for (int k = 1; k <= depth; ++k) lad[k] = m.add_state(BsmState{K::Ladder, k}.label(), k);
  for (int k = 1; k <= depth; ++k) pri[k] = m.add_state(BsmState{K::LadderPrime, k}.label(), k);
  const std::size_t f0o = m.add_state("0'o");
  const std::size_t f0b = m.add_state("0'b");

  m.add(zero, zero, q);
  m.add(zero, lad[1], a);
  for (int k = 1; k <= depth; ++k) {
    for (bool primed : {false, true}) {
      const std::size_t from = primed ? pri[k] : lad[k];
      const auto& same = primed ? pri : lad;
      m.add(from, k < depth ? same[k + 1] : from, a);
      if (k == 1) {
        m.add(from, f0o, o);
        m.add(from, f0b, beta);
      } else {
        m.add(from, pri[k - 1], q);
      }
    }
  }
  m.add(f0o, zero, 1.0);
  m.add(f0b, zero, 1.0);
  return m.reachable_from(zero);
}

BsmWinningProbs bsm_winning_probs(const StrategyParams& params) {
  validate(params);
  const double a = params.alpha, g = params.gamma;
  const double beta = params.target_power();
  const double o = 1.0 - a - beta;

  BsmWinningProbs w;
  w.p0b = beta / (o + beta);
  w.p0o = o / (o + beta);
  w.p_public = w.p0b * ((1 - g) * o + beta) + w.p0o * ((1 - g) * o + (1 - g) * beta);
  w.p_private = w.p0b * (g * o + a) + w.p0o * (g * o + g * beta + a);
  return w;
}

BsmOccupancy bsm_occupancy(const StrategyParams& params, const SolverOptions& opts) {
  validate(opts);
  TransitionModel m = build_bsm_chain(params, opts.depth);
  BsmOccupancy occ;
  occ.dist = solve_stationary(m, opts.tolerance);
  const auto& d = occ.dist;
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    const std::string& l = d.labels[i];
    if (l == "0") occ.p0 = d.probs[i];
    else if (l == "0'o") occ.f0o = d.probs[i];
    else if (l == "0'b") occ.f0b = d.probs[i];
    else if (l.back() == '\'') occ.primes += d.probs[i];
  }
  occ.tail_mass = d.tail_mass;
  return occ;
}

double bsm_adversary_reward(const StrategyParams& params, const BsmOccupancy& c) {
  const double a = params.alpha, g = params.gamma;
  const double beta = params.target_power();
  const double o = 1.0 - a - beta;
  const double ps = bsm_winning_probs(params).p_private;
  return c.f0b * (2 * a + g * o) + c.f0o * (2 * a + g * o + beta) +
         c.primes * ((1 - g) * o * ps + g * o + (1 - g) * beta * ps + g * beta);
}

RewardVector bsm_rewards(const StrategyParams& params, const BsmOccupancy& c, bool accept) {
  validate(params);
  const double a = params.alpha, g = params.gamma, eps = params.epsilon;
  const double beta = params.target_power();
  const double o = 1.0 - a - beta;
  const double pp = bsm_winning_probs(params).p_public;

  const double ra = bsm_adversary_reward(params, c);
  const double rb_deny = c.p0 * beta + c.f0b * ((1 - g) * o + 2 * beta) + c.f0o * beta;
  const double ro_accept = c.p0 * o + c.f0b * o + c.f0o * (2 * (1 - g) * o + g * o) +
                           c.primes * ((1 - g) * o * pp + (1 - g) * beta * pp);

  RewardVector rv;
  rv.accept = accept;
  if (accept) {
    rv.bribe_paid = eps * ra;
    rv.adversary = (1.0 - eps) * ra;
    rv.other = ro_accept;
    rv.targets = {rb_deny + eps * ra};
  } else {
    rv.adversary = ra - c.f0o * beta;
    rv.other = ro_accept + c.f0o * beta;
    rv.targets = {rb_deny};
  }
  rv.tail_bound = 3.0 * c.tail_mass;
  return rv;
}

RewardVector bsm_rewards(const StrategyParams& params, bool accept, const SolverOptions& opts) {
  return bsm_rewards(params, bsm_occupancy(params, opts), accept);
}

double bsm_epsilon_threshold(const StrategyParams& params, const BsmOccupancy& c) {
  const double ra = bsm_adversary_reward(params, c);
  if (!(ra > 0.0)) throw Error(ErrorCode::Domain, "adversary reward is zero; the bribe threshold is undefined");
  const double gap = c.f0o * params.target_power();
  return gap / ra;
}

double bsm_epsilon_threshold(const StrategyParams& params, const SolverOptions& opts) {
  return bsm_epsilon_threshold(params, bsm_occupancy(params, opts));
}

}  // namespace bribesim
