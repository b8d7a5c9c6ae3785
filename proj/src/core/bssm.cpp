#include "core/bssm.hpp"

#include <vector>

#include "core/error.hpp"

namespace bribesim {

std::string BssmState::label() const {
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
    case Kind::ZeroPrimeA:
      return "0'a";
  }
  return {};
}

TransitionModel build_bssm_chain(const StrategyParams& params, int depth) {
  validate(params);
  validate(SolverOptions{depth, 1.0});
  const double a = params.alpha;
  const double beta = params.target_power();
  const double s = (1.0 - params.rho) * a;  // a_s finds a block
  const double h = params.rho * a;          // a_i finds a block
  const double o = 1.0 - a - beta;
  const double q = 1.0 - a;

  using K = BssmState::Kind;
  TransitionModel m(depth, s);
  const std::size_t zero = m.add_state("0");
  std::vector<std::size_t> lad(depth + 1), pri(depth + 1);
  for (int k = 1; k <= depth; ++k) lad[k] = m.add_state(BssmState{K::Ladder, k}.label(), k);
  for (int k = 1; k <= depth; ++k) pri[k] = m.add_state(BssmState{K::LadderPrime, k}.label(), k);
  const std::size_t f0o = m.add_state("0'o");
  const std::size_t f0b = m.add_state("0'b");
  const std::size_t f0a = m.add_state("0'a");

  m.add(zero, zero, q + h);
  m.add(zero, lad[1], s);
  for (int k = 1; k <= depth; ++k) {
    for (bool primed : {false, true}) {
      const std::size_t from = primed ? pri[k] : lad[k];
      const auto& same = primed ? pri : lad;
      m.add(from, k < depth ? same[k + 1] : from, s);
      if (k == 1) {
        m.add(from, f0o, o);
        m.add(from, f0a, h);
        m.add(from, f0b, beta);
      } else if (k == 2) {
        m.add(from, zero, q);
        m.add(from, pri[1], h);
      } else {
        m.add(from, lad[k - 1], q);
        m.add(from, pri[k - 1], h);
      }
    }
  }
  for (std::size_t f : {f0o, f0b, f0a}) m.add(f, zero, 1.0);
  return m.reachable_from(zero);
}

BssmWinningProbs bssm_winning_probs(const StrategyParams& params) {
  validate(params);
  const double a = params.alpha, g = params.gamma;
  const double beta = params.target_power();
  const double s = (1.0 - params.rho) * a;
  const double h = params.rho * a;
  const double o = 1.0 - a - beta;
  const double d = 1.0 - a + h;

  BssmWinningProbs w;
  w.p0a = (h / d) * (h / d);
  w.p0o = (h / d) * (o / d);
  w.p0b = (h / d) * (beta / d);
  w.p_public = w.p0b * ((1 - g) * o + beta + h) + w.p0o * ((1 - g) * o + (1 - g) * beta + h) +
               w.p0a * ((1 - g) * o + (1 - g) * beta + h);
  w.p_private = (1.0 - a) / d + w.p0b * (g * o + s) + w.p0o * (g * o + g * beta + s) +
                w.p0a * (g * o + g * beta + s);
  return w;
}

BssmOccupancy bssm_occupancy(const StrategyParams& params, const SolverOptions& opts) {
  validate(opts);
  TransitionModel m = build_bssm_chain(params, opts.depth);
  BssmOccupancy occ;
  occ.dist = solve_stationary(m, opts.tolerance);
  const auto& d = occ.dist;
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    const std::string& l = d.labels[i];
    const double v = d.probs[i];
    const int k = d.levels[i];
    const bool primed = l.back() == '\'';
    if (l == "0") occ.p0 = v;
    else if (l == "0'o") occ.f0o = v;
    else if (l == "0'b") occ.f0b = v;
    else if (l == "0'a") occ.f0a = v;
    else if (k == 1) (primed ? occ.p1p : occ.p1) = v;
    else if (k == 2) (primed ? occ.p2p : occ.p2) = v;
    else (primed ? occ.prime3 : occ.ladder3) += v;
  }
  occ.tail_mass = d.tail_mass;
  return occ;
}

double bssm_adversary_reward(const StrategyParams& params, const BssmOccupancy& c) {
  const double a = params.alpha, g = params.gamma;
  const double beta = params.target_power();
  const double s = (1.0 - params.rho) * a;
  const double h = params.rho * a;
  const double o = 1.0 - a - beta;
  const double ps = bssm_winning_probs(params).p_private;
  return c.p0 * h + c.f0b * (2 * s + h + g * o) + c.f0o * (2 * s + h + g * o + beta) +
         c.f0a * (2 * a + beta + o) + c.p1p * (o + beta + h) + c.p2p * (3 * o + 3 * beta + h) +
         c.prime3 * (o * (1 + ps) + beta * (1 + ps) + h) + c.p2 * (2 * o + 2 * beta) +
         c.ladder3 * (o + beta) * ps;
}

RewardVector bssm_rewards(const StrategyParams& params, const BssmOccupancy& c, bool accept) {
  validate(params);
  const double a = params.alpha, g = params.gamma, eps = params.epsilon;
  const double beta = params.target_power();
  const double h = params.rho * a;
  const double o = 1.0 - a - beta;
  const double pp = bssm_winning_probs(params).p_public;
  const double deep = c.prime3 + c.ladder3;

  const double ra = bssm_adversary_reward(params, c);
  const double rb_deny = c.p0 * beta + c.f0b * ((1 - g) * o + 2 * beta + h) + c.f0o * beta + c.f0a * beta +
                         deep * beta * pp;
  const double ro_accept = c.p0 * o + c.f0b * ((1 - g) * o + g * o) + c.f0o * (2 * (1 - g) * o + h + g * o) +
                           c.f0a * o + deep * o * pp;

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

RewardVector bssm_rewards(const StrategyParams& params, bool accept, const SolverOptions& opts) {
  return bssm_rewards(params, bssm_occupancy(params, opts), accept);
}

double bssm_epsilon_threshold(const StrategyParams& params, const BssmOccupancy& c) {
  const double ra = bssm_adversary_reward(params, c);
  if (!(ra > 0.0)) throw Error(ErrorCode::Domain, "adversary reward is zero; the bribe threshold is undefined");
  const double gap = c.f0o * params.target_power();
  return gap / ra;
}

double bssm_epsilon_threshold(const StrategyParams& params, const SolverOptions& opts) {
  return bssm_epsilon_threshold(params, bssm_occupancy(params, opts));
}

}  // namespace bribesim
