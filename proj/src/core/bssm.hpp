#pragma once

#include <string>

#include "core/params.hpp"
#include "core/stationary.hpp"

namespace bribesim {

struct BssmState {
  enum class Kind { Zero, Ladder, LadderPrime, ZeroPrimeO, ZeroPrimeB, ZeroPrimeA };
  Kind kind = Kind::Zero;
  int k = 0;

  std::string label() const;
};

struct BssmWinningProbs {
  double p_public = 0.0;
  double p_private = 0.0;
  double p0o = 0.0;
  double p0b = 0.0;
  double p0a = 0.0;
};

/// Stationary mass grouped the way the reward formulas consume it.
struct BssmOccupancy {
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double p1p = 0.0;  // 1'
  double p2p = 0.0;  // 2'
  double ladder3 = 0.0;  // sum over k >= 3
  double prime3 = 0.0;   // sum over k' >= 3
  double f0o = 0.0;
  double f0b = 0.0;
  double f0a = 0.0;
  double tail_mass = 0.0;
  StationaryDistribution dist;
};

/// Targets are folded into their aggregate power. States that cannot be
/// reached (primes when rho = 0, 0'b when beta = 0) are left out.
TransitionModel build_bssm_chain(const StrategyParams& p, int depth);

BssmWinningProbs bssm_winning_probs(const StrategyParams& p);

BssmOccupancy bssm_occupancy(const StrategyParams& p, const SolverOptions& opts = {});

/// Rewards from an already solved chain. gamma and epsilon do not affect
/// the chain, so sweeps over them can reuse one occupancy.
RewardVector bssm_rewards(const StrategyParams& p, const BssmOccupancy& occ, bool accept);
RewardVector bssm_rewards(const StrategyParams& p, bool accept, const SolverOptions& opts = {});

/// Pre-bribe adversary reward R_a.
double bssm_adversary_reward(const StrategyParams& p, const BssmOccupancy& occ);

double bssm_epsilon_threshold(const StrategyParams& p, const BssmOccupancy& occ);
double bssm_epsilon_threshold(const StrategyParams& p, const SolverOptions& opts = {});

}  // namespace bribesim
